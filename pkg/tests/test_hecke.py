import pytest

from quiverhecke.scalars import FieldCtx, Params
from quiverhecke.heckeengine import (HeckeQuotient, HeckeBlocks,
                                     eigenvalue_window,
                                     reduced_multiplicities,
                                     mat_mul, mat_add, mat_identity,
                                     mat_zero, mat_is_zero, mat_eq,
                                     mat_rank, mat_inv, min_poly_roots,
                                     crt_idempotent_polys, mat_poly_eval)

F = FieldCtx(13)
PR = Params(F, 5, 2)


def _m(d):
    return {F.of(k): v for k, v in d.items()}


# -- matrix helpers -----------------------------------------------------------

def test_mat_inverse():
    A = [[F.of(2), F.of(1)], [F.of(1), F.of(1)]]   # columns
    B = mat_inv(F, A)
    assert mat_eq(F, mat_mul(F, A, B), mat_identity(F, 2))
    with pytest.raises(ArithmeticError):
        mat_inv(F, [[F.of(1), F.of(2)], [F.of(2), F.of(4)]])


def test_min_poly_roots_and_idempotents():
    # operator with a 2-dim Jordan block at 3 and a simple eigenvalue 7
    A = [[F.of(3), F.zero, F.zero],
         [F.one, F.of(3), F.zero],
         [F.zero, F.zero, F.of(7)]]
    r = min_poly_roots(F, A, [F.of(3), F.of(7), F.of(2)])
    assert r == {F.of(3): 2, F.of(7): 1}
    polys = crt_idempotent_polys(F, r)
    E3 = mat_poly_eval(F, polys[F.of(3)], A)
    E7 = mat_poly_eval(F, polys[F.of(7)], A)
    assert mat_eq(F, mat_add(F, E3, E7), mat_identity(F, 3))
    assert mat_is_zero(F, mat_mul(F, E3, E7))
    assert mat_eq(F, mat_mul(F, E3, E3), E3)
    assert mat_rank(F, E3) == 2 and mat_rank(F, E7) == 1


# -- small quotients ----------------------------------------------------------

def test_type_a_rank_one_dims():
    # univariate oracle: the type A rank-one quotient is
    # K[X^{±1}] / Π (X - λ)^{m(λ)}, of dimension Σ m(λ)
    for m in [{1: 1}, {1: 2}, {1: 2, 2: 1}, {2: 3}]:
        h = HeckeQuotient(F, PR, "A", 1, _m(m))
        assert h.closure().dim == sum(m.values())


def test_type_b_rank_one_dims():
    # λ = 1 self-inverse: m = 1 collapses to zero, m = 2 gives dim 4
    assert HeckeQuotient(F, PR, "B", 1, _m({1: 1})).closure().dim == 0
    assert HeckeQuotient(F, PR, "B", 1, _m({1: 2})).closure().dim == 4
    assert HeckeQuotient(F, PR, "B", 1, _m({5: 2})).closure().dim == 2


def test_type_a_two_strand_blocks(hecke_closure):
    hc = hecke_closure(F, PR, "A", 2, {1: 2})
    assert hc.dim == 8
    hb = HeckeBlocks(hc)
    dims = hb.residue_dims()
    key = {tuple(str(x) for x in k): v for k, v in dims.items()}
    assert key == {("1", "1"): 4, ("1", "4"): 2, ("1", "10"): 2}
    assert hb.orbit_central()
    assert hb.roots_in_window()


def test_block_structure(hecke_closure):
    # Σ_i e(i) = 1, orthogonality, centrality of orbit sums, and the
    # block dimensions add up to the quotient dimension
    for kind, n, m in [("A", 2, {1: 2}), ("B", 2, {5: 2})]:
        hc = hecke_closure(F, PR, kind, n, m)
        hb = HeckeBlocks(hc)
        res = hb.residue_idempotents()
        total = mat_zero(F, hc.dim)
        items = sorted(res.items(), key=lambda t: repr(t[0]))
        for _, E in items:
            assert mat_eq(F, mat_mul(F, E, E), E)
            total = mat_add(F, total, E)
        for t, (i, E) in enumerate(items):
            for j, Efol in items[t + 1:]:
                assert mat_is_zero(F, mat_mul(F, E, Efol)), (i, j)
        assert mat_eq(F, total, mat_identity(F, hc.dim))
        assert hb.orbit_central()
        assert sum(hb.orbit_dims().values()) == hc.dim


def test_eigenvalue_window():
    win = eigenvalue_window(F, PR, _m({5: 2}), 2, "B")
    # 5^{±1}·4^{N}, |N| <= 1
    assert win == {F.of(v) for v in (5, 7, 11, 8, 6, 2)}
    winA = eigenvalue_window(F, PR, _m({1: 1}), 2, "A")
    assert winA == {F.of(v) for v in (1, 4, 10)}


def test_roots_in_window(hecke_closure):
    for kind, n, m in [("A", 2, {1: 2}), ("B", 2, {5: 2})]:
        hc = hecke_closure(F, PR, kind, n, m)
        assert HeckeBlocks(hc).roots_in_window()


def test_reduced_multiplicities_rule():
    # p = 5 with p² = -1: both ±p and ±p^{-1} land on {5, 8}, slack 2
    assert reduced_multiplicities(F, PR, _m({5: 2})) == _m({5: 2})
    assert reduced_multiplicities(F, PR, _m({5: 3})) == _m({5: 2})
    # off the p-line the pair is capped at the partner multiplicity
    assert reduced_multiplicities(F, PR, _m({4: 2})) == {}
    assert reduced_multiplicities(F, PR, _m({4: 3, 10: 1})) == \
        _m({4: 1, 10: 1})
    # self-inverse values are untouched
    assert reduced_multiplicities(F, PR, _m({1: 1})) == _m({1: 1})
    # generic p-line slack is 1
    f5 = FieldCtx(5)
    pr5 = Params(f5, 2, 2)    # p = 2, p^{-1} = 3, p² = 4 = -1 again
    assert reduced_multiplicities(f5, pr5, {f5.of(2): 3}) == {f5.of(2): 2}


def test_reduced_multiplicities_preserve_dim():
    for m in [{5: 3}, {4: 2}, {4: 3, 10: 1}]:
        md = _m(m)
        red = reduced_multiplicities(F, PR, md)
        d1 = HeckeQuotient(F, PR, "B", 1, md).closure().dim
        d2 = HeckeQuotient(F, PR, "B", 1, red).closure().dim if red else 0
        assert d1 == d2, m


def test_relator_families_present():
    h = HeckeQuotient(F, PR, "B", 2, _m({5: 1}))
    names = {name for name, _ in h.relators()}
    for fam in ("quad", "braid4", "exch0", "luszt", "cyclo", "annih"):
        assert any(fam in n for n in names), (fam, names)
