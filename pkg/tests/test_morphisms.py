import pytest

from quiverhecke.scalars import FieldCtx, Params
from quiverhecke.quiverweyl import enumerate_orbit
from quiverhecke.polyengine import Series1, series_f
from quiverhecke.engine import NFAlgebra, elem_add_into
from quiverhecke.heckeengine import HeckeQuotient, HeckeBlocks
from quiverhecke.morphisms import (required_series_order, ModelView,
                                   Coupler, conditions_ok,
                                   GradedToDeformed, DeformedToGraded,
                                   RescalingAutomorphism,
                                   HeckeToDeformed, DeformedToHecke,
                                   verify_generator_map, roundtrip_ok,
                                   intertwiner_checks)

F = FieldCtx(13)
PR = Params(F, 5, 2)
F5 = FieldCtx(5)
PR5 = Params(F5, 2, 2)


def _uniform_pair(field, params, kind, seed, m, N):
    # condition checks need uniform truncation: the variable swap they
    # rely on is only a ring map when every block shares one bound
    blocks = enumerate_orbit(field, tuple(field.of(x) for x in seed), kind)
    md = {field.of(k): v for k, v in m.items()}
    gr = NFAlgebra(field, params, "poly", kind, blocks, md, N,
                   cyclotomic=False)
    df = NFAlgebra(field, params, "laurent", kind, blocks, md, N,
                   cyclotomic=False)
    return gr, df


COND_CASES = [
    (F, PR, "B", (5, 5), {5: 2}),     # equal + dead partner blocks
    (F, PR, "B", (1, 4), {1: 1}),     # to/from arrows, fixed + pperp
    (F, PR, "B", (5,), {5: 1}),       # pboth index-0 case
    (F, PR, "A", (1, 4), {1: 1}),
    (F5, PR5, "B", (1, 4), {1: 1}),   # double arrow (q^4 = 1)
]


@pytest.mark.parametrize("case", COND_CASES,
                         ids=["B55", "B14", "B5", "A14", "F5B14"])
def test_coupler_conditions(case):
    field, params, kind, seed, m = case
    gr, df = _uniform_pair(field, params, kind, seed, m, 3)
    cp = Coupler(field, params)
    for alg in (gr, df):
        fser = series_f(field, required_series_order(alg))
        rep = cp.check_conditions(ModelView(alg, fser))
        assert conditions_ok(rep), [r for r in rep if not r["ok"]]


def test_fault_injection_detected():
    gr, df = _uniform_pair(F, PR, "B", (1, 4), {1: 1}, 3)
    cp = Coupler(F, PR, twist0=lambda ring: ring.one().add(ring.var(1)))
    fser = series_f(F, required_series_order(gr))
    rep = cp.check_conditions(ModelView(gr, fser))
    assert not conditions_ok(rep)
    bad = {r["condition"] for r in rep if not r["ok"]}
    assert "norm-fixed" in bad and "pair-product" in bad
    cpk = Coupler(F, PR, twistk=lambda ring, k: ring.one().add(ring.var(k)))
    repk = cpk.check_conditions(ModelView(gr, fser))
    assert not conditions_ok(repk)


FG_CASES = [
    (F, PR, "A", (1, 4), {1: 1}),
    (F, PR, "B", (5, 5), {5: 2}),   # includes dead blocks starting at 8
]


@pytest.mark.parametrize("case", FG_CASES, ids=["A14", "B55"])
def test_graded_deformed_roundtrip(case, model_closure):
    field, params, kind, seed, m = case
    gr, relg, cg = model_closure(field, params, "poly", kind, seed, m, 4)
    df, reld, cd = model_closure(field, params, "laurent", kind, seed, m, 4)
    assert len(cg.basis()) == len(cd.basis()) > 0
    fser = series_f(field, max(required_series_order(gr),
                               required_series_order(df)))
    cp = Coupler(field, params)
    fwd = GradedToDeformed(gr, df, cp, fser, cd)
    back = DeformedToGraded(df, gr, cp, fser, cg)
    ok1, rep1 = verify_generator_map(fwd, relg)
    assert ok1, [n for n, ok in rep1 if not ok]
    ok2, rep2 = verify_generator_map(back, reld)
    assert ok2, [n for n, ok in rep2 if not ok]
    assert roundtrip_ok(fwd, back, cg)
    assert roundtrip_ok(back, fwd, cd)


def test_drop_coupling_breaks_homomorphy(model_closure):
    # the equal-block orbit is sensitive to the missing coupling; the
    # arrow-only orbit is not, since its couplings are unipotent there
    gr, relg, cg = model_closure(F, PR, "poly", "B", (5, 5), {5: 2}, 4)
    df, reld, cd = model_closure(F, PR, "laurent", "B", (5, 5), {5: 2}, 4)
    fser = series_f(F, max(required_series_order(gr),
                           required_series_order(df)))
    fwd = GradedToDeformed(gr, df, Coupler(F, PR), fser, cd,
                           drop_coupling=True)
    ok, _ = verify_generator_map(fwd, relg)
    assert not ok


def test_rescaling_automorphisms(model_closure):
    grA, relA, cA = model_closure(F, PR, "poly", "A", (1, 4), {1: 1}, 4)
    need = required_series_order(grA)

    def ser(coeffs):
        return Series1(F, coeffs + [0] * (need - len(coeffs)))

    for fam in ([0, 1], [0, 2], [0, 1, 1]):
        fser = ser(fam)
        auto = RescalingAutomorphism(grA, fser, cA)
        ok, rep = verify_generator_map(auto, relA)
        assert ok, (fam, [n for n, o in rep if not o])
        back = RescalingAutomorphism(grA, fser.comp_inverse(), cA)
        for a in grA.weyl.gens:
            x = grA.rmul_gen(grA.unit(), a)
            img = back.image_elem(auto.image_elem(x))
            diff = dict(img)
            elem_add_into(F, diff, x, F.neg(F.one))
            assert cA.is_zero_mod_ideal(diff), fam


def test_rescaling_rejects_short_series(model_closure):
    grA, _, _ = model_closure(F, PR, "poly", "A", (1, 4), {1: 1}, 4)
    with pytest.raises(ValueError):
        RescalingAutomorphism(grA, Series1(F, [0, 1]))


def test_hecke_spectral_maps(hecke_closure, model_closure):
    h = HeckeQuotient(F, PR, "B", 2, {F.of(5): 2})
    hc = hecke_closure(F, PR, "B", 2, {5: 2})
    hb = HeckeBlocks(hc)
    df, reld, cd = model_closure(F, PR, "laurent", "B", (5, 5), {5: 2}, 4)
    sig = HeckeToDeformed(h, df, cd)
    ok1, rep1 = verify_generator_map(sig, h.relators())
    assert ok1, [n for n, o in rep1 if not o]
    rho = DeformedToHecke(df, hc, hb)
    assert rho.required_truncation() <= df.N
    ok2, rep2 = verify_generator_map(rho, reld)
    assert ok2, [n for n, o in rep2 if not o]


def test_intertwiner_identities(hecke_closure):
    for kind, m in [("A", {1: 2}), ("B", {5: 2})]:
        hc = hecke_closure(F, PR, kind, 2, m)
        ic = intertwiner_checks(hc, 1)
        assert ic["exchange"] and ic["square"], (kind, ic)
