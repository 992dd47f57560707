import pytest

from quiverhecke.scalars import FieldCtx, Params
from quiverhecke.quiverweyl import enumerate_orbit
from quiverhecke.engine import NFAlgebra, closure
from quiverhecke.presentations import (poly_relators, laurent_relators,
                                       relator_exprs)
from quiverhecke.heckeengine import HeckeQuotient


@pytest.fixture(scope="session")
def F13():
    return FieldCtx(13)


@pytest.fixture(scope="session")
def pr13(F13):
    return Params(F13, 5, 2)


@pytest.fixture(scope="session")
def F5():
    return FieldCtx(5)


@pytest.fixture(scope="session")
def pr5(F5):
    return Params(F5, 2, 2)


_hecke_cache: dict = {}


def _hecke_closure(field, params, kind, n, m):
    key = (field.char, repr(params.p), repr(params.q), kind, n,
           tuple(sorted((repr(field.of(k)), v) for k, v in m.items())))
    if key not in _hecke_cache:
        h = HeckeQuotient(field, params, kind, n,
                          {field.of(k): v for k, v in m.items()})
        _hecke_cache[key] = h.closure()
    return _hecke_cache[key]


@pytest.fixture(scope="session")
def hecke_closure():
    return _hecke_closure


_model_cache: dict = {}


def _model_closure(field, params, nf, kind, seed, m, N, cyclotomic=True):
    key = (field.char, repr(params.p), repr(params.q), nf, kind,
           tuple(repr(field.of(x)) for x in seed),
           tuple(sorted((repr(field.of(k)), v) for k, v in m.items())),
           N, cyclotomic)
    if key not in _model_cache:
        blocks = enumerate_orbit(field, tuple(field.of(x) for x in seed),
                                 kind)
        md = {field.of(k): v for k, v in m.items()}
        alg = NFAlgebra(field, params, nf, kind, blocks, md, N,
                        cyclotomic=cyclotomic)
        if nf == "poly":
            labeled = poly_relators(alg, kind == "B", cyclotomic)
        else:
            labeled = laurent_relators(alg)
        _model_cache[key] = (alg, labeled,
                             closure(alg, relator_exprs(labeled)))
    return _model_cache[key]


@pytest.fixture(scope="session")
def model_closure():
    return _model_closure
