"""Defining relators of the block-presented algebras, as token expressions.

An expression is a list of (scalar, tokens) pairs; tokens multiply left to
right starting from the unit. Token kinds:

  ('e', block)     block idempotent,
  ('g', a)         crossing generator indexed a,
  ('m', exp)       monomial in the degree-2 / deviation variables,
  ('x', exp)       Laurent monomial in the invertible generators,
  ('c', fn, name)  block-dependent coefficient, fn(block) -> TruncPoly.

The relator lists intentionally restate the case tables of the defining
relations in terms of the quiver classification functions, independently
of the rewriting tables inside the engine: evaluating every relator to
zero (or collecting its residual into the quotient ideal) is the
confluence check that makes the computed dimensions exact.
"""

from __future__ import annotations

from .quiverweyl import arrow_class, p_class, gen_act_lattice
from .polyengine import (
    gamma_a, correction_Z, correction_Y0, correction_Y1,
    geom_ratio_terms, alpha_exp, qa_value,
)


def _ev(n: int, k: int, power: int = 1) -> tuple:
    return tuple(power if t == k - 1 else 0 for t in range(n))


def _idempotent_relators(alg):
    out = []
    for i in alg.blocks:
        for j in alg.blocks:
            if i != j:
                out.append(("orth-e", [(1, (("e", i), ("e", j)))]))
    unit = [(1, (("e", i),)) for i in alg.blocks]
    unit.append((-1, ()))
    out.append(("sum-e", unit))
    return out


def _comm_through_e(alg, token_of_var):
    out = []
    for k in range(1, alg.n + 1):
        t = token_of_var(k)
        for i in alg.blocks:
            out.append(("var-e-comm", [
                (1, (t, ("e", i))),
                (-1, (("e", i), t)),
            ]))
    return out


def _crossing_block_relators(alg):
    out = []
    for a in alg.weyl.gens:
        for i in alg.blocks:
            out.append(("g-e-shift", [
                (1, (("g", a), ("e", i))),
                (-1, (("e", alg.gen_act(a, i)), ("g", a))),
            ]))
    return out


def _commutation_relators(alg):
    out = []
    for a in alg.weyl.gens:
        for b in alg.weyl.gens:
            if b - a > 1:
                for i in alg.blocks:
                    out.append(("g-comm", [
                        (1, (("g", a), ("g", b), ("e", i))),
                        (-1, (("g", b), ("g", a), ("e", i))),
                    ]))
    return out


# ---------------------------------------------------------------------------
# Polynomial-coefficient presentations
# ---------------------------------------------------------------------------

def _quad_coeff_poly(alg, a: int, i: tuple):
    f = alg.field
    ring = alg.ring(i)
    if a == 0:
        cls = p_class(f, alg.params, i[0])
        y1 = ring.var(1)
        return {
            "fixed": ring.zero(),
            "pperp": ring.one(),
            "pto": y1,
            "pfrom": y1.neg(),
            "pboth": y1.mul(y1).neg(),
        }[cls]
    ib, ib1 = i[a - 1], i[a]
    if ib == ib1:
        return ring.zero()
    yb, yb1 = ring.var(a), ring.var(a + 1)
    return {
        "perp": ring.one(),
        "to": yb1.sub(yb),
        "from": yb.sub(yb1),
        "both": yb1.sub(yb).mul(yb.sub(yb1)),
    }[arrow_class(f, alg.params, ib, ib1)]


def _braid3_terms_poly(alg, b: int, i: tuple):
    """(correction to the 3-term braid relator at block i) as expr terms."""
    f = alg.field
    ring = alg.ring(i)
    ib, ib1, ib2 = i[b - 1], i[b], i[b + 1]
    if ib != ib2 or ib == ib1:
        return []
    cls = arrow_class(f, alg.params, ib, ib1)
    if cls == "to":
        return [(1, (("e", i),))]
    if cls == "from":
        return [(-1, (("e", i),))]
    if cls == "both":
        def coeff(blk, b=b):
            r = alg.ring(blk)
            return r.var(b + 2).add(r.var(b)).sub(r.var(b + 1).scale(2))
        return [(1, (("c", coeff, "y-laplacian"), ("e", i)))]
    return []


def _braid4_terms_poly(alg, i: tuple):
    f = alg.field
    i1, i2 = i[0], i[1]
    i1_self = f.inv(i1) == i1
    i2_self = f.inv(i2) == i2
    arr = (lambda: arrow_class(f, alg.params, i1, i2)) if i1 != i2 else None
    if not i1_self and i2_self and arr and arr() == "to":
        return [(2, (("g", 0), ("e", i)))]
    if not i1_self and i2_self and arr and arr() == "from":
        return [(-2, (("g", 0), ("e", i)))]
    if i1_self and i2_self and i1 != i2 and arr and arr() == "both":
        return [(4, (("g", 0), ("m", _ev(alg.n, 1)), ("e", i))),
                (-4, (("e", i),))]
    if i1 != i2 and f.inv(i1) == i2:
        cls = p_class(f, alg.params, i1)
        if cls == "pto":
            return [(-1, (("g", 1), ("e", i)))]
        if cls == "pfrom":
            return [(1, (("g", 1), ("e", i)))]
        if cls == "pboth":
            def coeff(blk):
                r = alg.ring(blk)
                return r.var(1).sub(r.var(2))
            return [(1, (("g", 1), ("c", coeff, "y1-y2"), ("e", i)))]
    return []


def poly_relators(alg, with_zero_gen: bool, cyclotomic: bool):
    """Relators of the graded presentation on the blocks of `alg`.

    with_zero_gen=False gives the type-A presentation (generators 1..n-1
    and their relations only)."""
    n = alg.n
    out = []
    out += _idempotent_relators(alg)
    out += _comm_through_e(alg, lambda k: ("m", _ev(n, k)))
    out += _crossing_block_relators(alg)
    out += _commutation_relators(alg)
    for b in range(1, n):
        for j in range(1, n + 1):
            sj = j
            if j == b:
                sj = b + 1
            elif j == b + 1:
                sj = b
            for i in alg.blocks:
                expr = [(1, (("g", b), ("m", _ev(n, j)), ("e", i))),
                        (-1, (("m", _ev(n, sj)), ("g", b), ("e", i)))]
                if i[b - 1] == i[b]:
                    if j == b:
                        expr.append((1, (("e", i),)))
                    elif j == b + 1:
                        expr.append((-1, (("e", i),)))
                out.append(("pass-swap", expr))
    for b in range(1, n):
        for i in alg.blocks:
            expr = [(1, (("g", b), ("g", b), ("e", i)))]
            R = _quad_coeff_poly(alg, b, i)
            if not R.is_zero():
                expr.append((-1, (("c", (lambda blk, b=b:
                                         _quad_coeff_poly(alg, b, blk)),
                                   "quad"), ("e", i))))
            out.append(("quad-swap", expr))
    for b in range(1, n - 1):
        for i in alg.blocks:
            expr = [(1, (("g", b), ("g", b + 1), ("g", b), ("e", i))),
                    (-1, (("g", b + 1), ("g", b), ("g", b + 1), ("e", i)))]
            expr += [(-s, t) for s, t in _braid3_terms_poly(alg, b, i)]
            out.append(("braid3", expr))
    if with_zero_gen:
        for i in alg.blocks:
            expr = [(1, (("g", 0), ("m", _ev(n, 1)), ("e", i))),
                    (1, (("m", _ev(n, 1)), ("g", 0), ("e", i)))]
            if alg.field.inv(i[0]) == i[0]:
                expr.append((-2, (("e", i),)))
            out.append(("pass-invert", expr))
        for j in range(2, n + 1):
            for i in alg.blocks:
                out.append(("pass-invert-far", [
                    (1, (("g", 0), ("m", _ev(n, j)), ("e", i))),
                    (-1, (("m", _ev(n, j)), ("g", 0), ("e", i)))]))
        for i in alg.blocks:
            expr = [(1, (("g", 0), ("g", 0), ("e", i)))]
            R = _quad_coeff_poly(alg, 0, i)
            if not R.is_zero():
                expr.append((-1, (("c", (lambda blk:
                                         _quad_coeff_poly(alg, 0, blk)),
                                   "quad0"), ("e", i))))
            out.append(("quad-invert", expr))
        if n >= 2:
            for i in alg.blocks:
                expr = [(1, (("g", 0), ("g", 1), ("g", 0), ("g", 1),
                             ("e", i))),
                        (-1, (("g", 1), ("g", 0), ("g", 1), ("g", 0),
                              ("e", i)))]
                expr += [(-s, t) for s, t in _braid4_terms_poly(alg, i)]
                out.append(("braid4", expr))
    if cyclotomic:
        for i in alg.blocks:
            mi = alg.mult(i[0])
            out.append(("cyclo", [(1, (("m", _ev(n, 1, mi)), ("e", i)))]))
    return out


# ---------------------------------------------------------------------------
# Laurent-coefficient (deformed) presentation
# ---------------------------------------------------------------------------

def _phi2_coeff(alg, a: int, x: tuple):
    """(q_a - q_a^{-1} X^{-alpha_a}) (X^x - X^{r_a x})/(1 - X^{-alpha_a})."""
    f = alg.field
    qa = qa_value(alg.params, a)
    neg_al = tuple(-e for e in alpha_exp(a, alg.n))

    def coeff(blk, a=a, x=x, qa=qa, neg_al=neg_al):
        br = alg.blockring(blk)
        out = br.ring.zero()
        for mono, sgn in geom_ratio_terms(x, a, alg.n):
            ratio = br.xmono(mono)
            if sgn < 0:
                ratio = ratio.neg()
            out = out.add(ratio.scale(qa).sub(
                ratio.mul(br.xmono(neg_al)).scale(f.inv(qa))))
        return out
    return coeff


def _braid3_terms_laurent(alg, b: int, i: tuple):
    ib, ib1, ib2 = i[b - 1], i[b], i[b + 1]
    if ib == ib1 == ib2:
        return [(1, (("g", b), ("e", i))), (-1, (("g", b + 1), ("e", i)))]
    if ib == ib2 and ib != ib1:
        def coeff(blk, b=b):
            return correction_Z(alg.blockring(blk), alg.params, b)
        return [(1, (("c", coeff, "Zcorr"), ("e", i)))]
    return []


def _braid4_terms_laurent(alg, i: tuple):
    f = alg.field
    p = alg.params.p
    i1, i2 = i[0], i[1]
    i1_self = f.inv(i1) == i1
    i2_self = f.inv(i2) == i2
    neg_a0 = tuple(-e for e in alpha_exp(0, alg.n))
    neg_a1 = tuple(-e for e in alpha_exp(1, alg.n))
    if i1 == i2 and i1_self:
        c = f.add(f.mul(p, f.inv(alg.params.q)),
                  f.mul(f.inv(p), alg.params.q))
        return [(c, (("g", 0), ("g", 1), ("e", i))),
                (f.neg(c), (("g", 1), ("g", 0), ("e", i)))]
    if i1 != i2 and i1_self and i2_self:
        def lead(blk):
            br = alg.blockring(blk)
            return br.one_minus_xpow(neg_a0).mul(
                correction_Y0(br, alg.params))

        def tail(blk):
            br = alg.blockring(blk)
            t = br.ring.const(p).sub(br.xmono(neg_a0).scale(f.inv(p)))
            return t.mul(correction_Y0(br, alg.params))
        return [(1, (("g", 0), ("c", lead, "Y0lead"), ("e", i))),
                (-1, (("c", tail, "Y0tail"), ("e", i)))]
    if i1 != i2 and not i1_self and i2_self:
        def lead(blk):
            br = alg.blockring(blk)
            return br.one_minus_xpow(neg_a0).mul(
                correction_Y0(br, alg.params))
        return [(1, (("g", 0), ("c", lead, "Y0lead"), ("e", i)))]
    if i1 != i2 and not i1_self and f.inv(i1) == i2:
        def lead(blk):
            br = alg.blockring(blk)
            return br.one_minus_xpow(neg_a1).mul(
                correction_Y1(br, alg.params))
        return [(-1, (("g", 1), ("c", lead, "Y1lead"), ("e", i)))]
    return []


def laurent_relators(alg):
    """Relators of the deformed intermediary presentation."""
    n = alg.n
    f = alg.field
    out = []
    out += _idempotent_relators(alg)
    out += _comm_through_e(alg, lambda k: ("x", _ev(n, k)))
    out += _crossing_block_relators(alg)
    out += _commutation_relators(alg)
    for i in alg.blocks:
        out.append(("nilp-1", [(1, (("m", _ev(n, 1, alg.mult(i[0]))),
                                    ("e", i)))]))
        for k in range(2, n + 1):
            out.append(("nilp-k", [(1, (("m", _ev(n, k, alg.N)),
                                        ("e", i)))]))
    for a in alg.weyl.gens:
        for k in range(1, n + 1):
            for sgn in (1, -1):
                x = _ev(n, k, sgn)
                rx = gen_act_lattice(a, x)
                for i in alg.blocks:
                    expr = [(1, (("g", a), ("x", x), ("e", i))),
                            (-1, (("x", rx), ("g", a), ("e", i)))]
                    if alg.gen_act(a, i) == i:
                        expr.append(
                            (-1, (("c", _phi2_coeff(alg, a, x), "pass"),
                                  ("e", i))))
                    out.append(("pass-x", expr))
    for a in alg.weyl.gens:
        qa = qa_value(alg.params, a)
        for i in alg.blocks:
            expr = [(1, (("g", a), ("g", a), ("e", i)))]
            if alg.gen_act(a, i) == i:
                expr.append((f.neg(f.add(qa, f.inv(qa))),
                             (("g", a), ("e", i))))
            else:
                def coeff(blk, a=a):
                    return gamma_a(alg.blockring(blk), alg.params, a)
                expr.append((-1, (("c", coeff, "Gamma"), ("e", i))))
            out.append(("quad-x", expr))
    for b in range(1, n - 1):
        for i in alg.blocks:
            expr = [(1, (("g", b), ("g", b + 1), ("g", b), ("e", i))),
                    (-1, (("g", b + 1), ("g", b), ("g", b + 1), ("e", i)))]
            expr += [(f.neg(f.of(s)), t)
                     for s, t in _braid3_terms_laurent(alg, b, i)]
            out.append(("braid3-x", expr))
    if n >= 2 and alg.gtype == "B":
        for i in alg.blocks:
            expr = [(1, (("g", 0), ("g", 1), ("g", 0), ("g", 1), ("e", i))),
                    (-1, (("g", 1), ("g", 0), ("g", 1), ("g", 0),
                          ("e", i)))]
            expr += [(f.neg(f.of(s)), t)
                     for s, t in _braid4_terms_laurent(alg, i)]
            out.append(("braid4-x", expr))
    return out


def relator_exprs(labeled):
    return [expr for _, expr in labeled]


def describe(labeled):
    """Counts per relator family, for reports."""
    out = {}
    for name, _ in labeled:
        out[name] = out.get(name, 0) + 1
    return out
