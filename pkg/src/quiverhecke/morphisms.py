"""Maps between the three models of one block, and their certification.

The three finite models of a block are

  * the graded model (polynomial coefficient generators, engine kind
    'poly'),
  * the deformed model (invertible coefficient generators, engine kind
    'laurent'),
  * the spectral block of the finite Hecke-type quotient (heckeengine).

A change of variable f (a composition-invertible series with zero
constant term, inverse g) identifies the coefficient towers of the two
normal-form models:  y_k on the graded side corresponds to f(1 - i_k^{-1}X_k)
on the deformed side, and X_k corresponds to i_k(1 - g(y_k)).  The
crossing generators correspond up to an invertible coefficient series,
one per block and crossing index, built here (`Coupler`) from the same
case tables that drive the presentations.  The remaining pair of maps
exchanges the deformed model with the spectral block of the Hecke
quotient, where the idempotents are spectral projectors and the crossing
images acquire resolvent corrections.

Every map is certified, never assumed: `verify_generator_map` pushes
each defining relator of the source through the generator images and
tests that the result vanishes in the target (modulo the target's
relator ideal for the normal-form models, as a zero matrix for the
Hecke model).
"""

from __future__ import annotations

from .scalars import FieldCtx, Params
from .quiverweyl import arrow_class, p_class, gen_act_lattice
from .polyengine import (
    Series1, TruncPoly, UndefinedOnBlock, subst_X, alpha_exp, qa_value,
    series_f,
)
from .engine import NFAlgebra, ClosureResult, elem_add_into
from .heckeengine import (
    HeckeQuotient, HeckeClosure, HeckeBlocks,
    mat_mul, mat_add, mat_scale, mat_identity, mat_zero, mat_is_zero,
    mat_eq, mat_inv,
)


# ---------------------------------------------------------------------------
# Series utilities
# ---------------------------------------------------------------------------

def required_series_order(alg: NFAlgebra) -> int:
    """Order making truncated series evaluation exact in every block ring."""
    best = 2
    for i in alg.blocks:
        bounds = alg.ring(i).bounds
        if 0 in bounds:
            continue
        best = max(best, 1 + sum(b - 1 for b in bounds))
    return best


def pad_series(field: FieldCtx, coeffs, order: int) -> Series1:
    coeffs = list(coeffs) + [field.zero] * max(0, order - len(coeffs))
    return Series1(field, coeffs[:max(order, len(coeffs))])


def series_diff_quotient(s: Series1, A: TruncPoly, B: TruncPoly) -> TruncPoly:
    """(s(B) - s(A)) / (B - A) for nilpotent arguments, exactly.

    Uses sum_{m>=1} s_m sum_{j<m} A^j B^{m-1-j}; the inner sums satisfy
    the recursion inner_{m+1} = inner_m * B + A^m.
    """
    ring = A.ring
    inner = ring.one()
    apow = ring.one()
    total = ring.zero()
    for m in range(1, s.order):
        total = total.add(inner.scale(s[m]))
        apow = apow.mul(A)
        inner = inner.mul(B).add(apow)
        if inner.is_zero() and apow.is_zero():
            break
    return total


# ---------------------------------------------------------------------------
# Per-model values of the shared coefficient symbols
# ---------------------------------------------------------------------------

class ModelView:
    """Per-block values of the common symbols in one coefficient model.

    In the graded model the y_k are the ring variables and X_k is the
    unit i_k(1 - g(y_k)); in the deformed model X_k is i_k + v_k and
    y_k = f(1 - i_k^{-1}X_k) = f(-i_k^{-1} v_k).
    """

    def __init__(self, alg: NFAlgebra, f: Series1):
        need = required_series_order(alg)
        if f.order < need:
            raise ValueError("series order %d < required %d"
                             % (f.order, need))
        self.alg = alg
        self.f = f
        self.g = f.comp_inverse()
        self._y: dict = {}
        self._x: dict = {}
        self._xinv: dict = {}

    def y(self, i: tuple, k: int) -> TruncPoly:
        key = (i, k)
        if key not in self._y:
            ring = self.alg.ring(i)
            if self.alg.kind == "poly":
                self._y[key] = ring.var(k)
            else:
                arg = ring.var(k).scale(
                    self.alg.field.neg(self.alg.field.inv(i[k - 1])))
                self._y[key] = self.f.eval_trunc(arg)
        return self._y[key]

    def x(self, i: tuple, k: int) -> TruncPoly:
        key = (i, k)
        if key not in self._x:
            ring = self.alg.ring(i)
            if self.alg.kind == "laurent":
                self._x[key] = ring.const(i[k - 1]).add(ring.var(k))
            else:
                self._x[key] = ring.one().sub(
                    self.g.eval_trunc(ring.var(k))).scale(i[k - 1])
        return self._x[key]

    def xinv(self, i: tuple, k: int) -> TruncPoly:
        key = (i, k)
        if key not in self._xinv:
            X = self.x(i, k)
            self._xinv[key] = X.inv() if X.is_unit() else X.ring.zero()
        return self._xinv[key]

    def xs(self, i: tuple) -> dict:
        return {k: self.x(i, k) for k in range(1, self.alg.n + 1)}

    def dead(self, i: tuple) -> bool:
        return self.alg.ring(i).one().is_zero()


# ---------------------------------------------------------------------------
# The coupling family between the two normal-form models
# ---------------------------------------------------------------------------

def _ldict_mul(field, A: dict, B: dict) -> dict:
    out: dict = {}
    for xa, ca in A.items():
        for xb, cb in B.items():
            x = tuple(a + b for a, b in zip(xa, xb))
            s = field.add(out.get(x, field.zero), field.mul(ca, cb))
            if field.is_zero(s):
                out.pop(x, None)
            else:
                out[x] = s
    return out


def _gamma_parts(field, params: Params, a: int, n: int):
    """Numerator and denominator of the quadratic coefficient of the
    deformed model, as Laurent polynomials in the X's."""
    qa = qa_value(params, a)
    qai = field.inv(qa)
    al = alpha_exp(a, n)
    nal = tuple(-e for e in al)
    zero = (0,) * n
    num = _ldict_mul(field, {zero: qa, al: field.neg(qai)},
                     {zero: qa, nal: field.neg(qai)})
    den = _ldict_mul(field, {zero: field.one, al: field.neg(field.one)},
                     {zero: field.one, nal: field.neg(field.one)})
    return num, den


class Coupler:
    """Invertible coefficient series rescaling the crossing generators
    between the graded and deformed models, one per (index, block).

    `twist0` and `twistk`, if given, multiply the constructed entries;
    they exist for fault-injection tests and must be unit-valued
    functions of the block ring.
    """

    def __init__(self, field: FieldCtx, params: Params,
                 twist0=None, twistk=None):
        self.field = field
        self.params = params
        self.twist0 = twist0
        self.twistk = twistk
        self._cache: dict = {}

    def at(self, view: ModelView, a: int, i: tuple) -> TruncPoly:
        # keyed on the view object itself (kept alive by the cache)
        key = (view, a, i)
        if key not in self._cache:
            val = self._entry0(view, i) if a == 0 else self._entry(view, a, i)
            self._cache[key] = val
        return self._cache[key]

    def inv_at(self, view: ModelView, a: int, i: tuple) -> TruncPoly:
        val = self.at(view, a, i)
        return val.inv() if val.is_unit() else val.ring.zero()

    def _entry(self, view: ModelView, k: int, i: tuple) -> TruncPoly:
        f = self.field
        ring = view.alg.ring(i)
        if view.dead(i):
            return ring.zero()
        q = self.params.q
        qi = f.inv(q)
        ik, ik1 = i[k - 1], i[k]
        Xk, Xk1 = view.x(i, k), view.x(i, k + 1)
        if ik == ik1:
            h = series_diff_quotient(view.g, view.y(i, k), view.y(i, k + 1))
            val = Xk.scale(qi).sub(Xk1.scale(q)).scale(f.inv(ik)).mul(h.inv())
        else:
            cls = arrow_class(f, self.params, ik, ik1)
            if cls == "perp":
                val = Xk.scale(q).sub(Xk1.scale(qi)).mul(Xk.sub(Xk1).inv())
            elif cls == "to":
                h = series_diff_quotient(view.g, view.y(i, k),
                                         view.y(i, k + 1))
                num = Xk1.scale(q).sub(Xk.scale(qi)).scale(f.mul(q, ik))
                den = Xk.sub(Xk1).mul(Xk1.sub(Xk))
                val = num.mul(den.inv()).mul(h)
            elif cls == "from":
                val = ring.one()
            else:  # both arrows
                h = series_diff_quotient(view.g, view.y(i, k),
                                         view.y(i, k + 1))
                val = Xk.sub(Xk1).inv().scale(f.mul(q, ik)).mul(h)
        if self.twistk is not None:
            val = val.mul(self.twistk(ring, k))
        return val

    def _entry0(self, view: ModelView, i: tuple) -> TruncPoly:
        f = self.field
        ring = view.alg.ring(i)
        if view.dead(i):
            return ring.zero()
        p = self.params.p
        pi = f.inv(p)
        i1 = i[0]
        X1 = view.x(i, 1)
        Xb = view.xinv(i, 1)
        cls = p_class(f, self.params, i1)
        if cls == "fixed":
            val = Xb.scale(pi).sub(X1.scale(p)).scale(f.inv(i1))
        elif cls == "pperp":
            val = Xb.scale(p).sub(X1.scale(pi)).mul(Xb.sub(X1).inv())
        elif cls == "pto":
            num = X1.scale(p).sub(Xb.scale(pi)).scale(f.mul(p, f.inv(i1)))
            den = Xb.sub(X1).mul(X1.sub(Xb))
            val = num.mul(den.inv())
        elif cls == "pfrom":
            val = ring.one()
        else:  # pboth
            val = Xb.sub(X1).inv().scale(f.mul(p, f.inv(i1)))
        if self.twist0 is not None:
            val = val.mul(self.twist0(ring))
        return val

    # -- the defining conditions, checked denominator-cleared ----------------
    def check_conditions(self, view: ModelView):
        """Certify the family on one model; returns a list of records
        {condition, index, block, ok, residual}."""
        alg = view.alg
        f = self.field
        out = []

        def rec(cond, idx, i, diff):
            out.append({"condition": cond, "index": idx, "block": i,
                        "ok": diff.is_zero(), "residual": repr(diff)})

        for i in alg.blocks:
            if view.dead(i):
                continue
            for k in range(1, alg.n):
                Q = self.at(view, k, i)
                ik, ik1 = i[k - 1], i[k]
                yk, yk1 = view.y(i, k), view.y(i, k + 1)
                Xk, Xk1 = view.x(i, k), view.x(i, k + 1)
                if ik == ik1:
                    # defining normalization on equal entries, cleared of
                    # the (g(y_{k+1}) - g(y_k)) denominator
                    lhs = Q.mul(view.g.eval_trunc(yk1).sub(
                        view.g.eval_trunc(yk)))
                    rhs = Xk.scale(f.inv(self.params.q)).sub(
                        Xk1.scale(self.params.q)).scale(
                            f.inv(ik)).mul(yk1.sub(yk))
                    rec("norm-equal", k, i, lhs.sub(rhs))
                    continue
                # opposite-pair product against the quadratic coefficient
                j = alg.gen_act(k, i)
                Qr = alg.transport(k, self.at(view, k, j), j)
                lhs = Qr.mul(Q)
                num, den = _gamma_parts(f, self.params, k, alg.n)
                ring = alg.ring(i)
                numv = subst_X(num, view.xs(i), ring)
                denv = subst_X(den, view.xs(i), ring)
                # the coupled-pair product yields the quadratic coefficient
                # of the graded model: (y_{k+1}-y_k) toward the arrow and
                # (y_k-y_{k+1}) against it
                cls = arrow_class(f, self.params, ik, ik1)
                if cls == "to":
                    lhs = lhs.mul(yk1.sub(yk))
                elif cls == "from":
                    lhs = lhs.mul(yk.sub(yk1))
                elif cls == "both":
                    lhs = lhs.mul(yk.sub(yk1)).mul(yk1.sub(yk))
                rec("pair-product", k, i, lhs.mul(denv).sub(numv))
            # triple-index compatibility (needs three strands)
            for k in range(1, alg.n - 1):
                j1 = alg.gen_act(k, alg.gen_act(k + 1, i))      # r_k r_{k+1} i
                j2 = alg.gen_act(k + 1, alg.gen_act(k, i))      # r_{k+1} r_k i
                lhs = alg.transport(k, self.at(view, k + 1, j2), j2)
                rhs = alg.transport(k + 1, self.at(view, k, j1), j1)
                rec("triple-compat", k, i, lhs.sub(rhs))
            if alg.gtype != "B":
                continue
            i1 = i[0]
            cls0 = p_class(f, self.params, i1)
            Q0 = self.at(view, 0, i)
            if cls0 == "fixed":
                rhs = view.xinv(i, 1).scale(f.inv(self.params.p)).sub(
                    view.x(i, 1).scale(self.params.p)).scale(f.inv(i1))
                rec("norm-fixed", 0, i, Q0.sub(rhs))
            else:
                j = alg.gen_act(0, i)
                Qr = alg.transport(0, self.at(view, 0, j), j)
                lhs = Qr.mul(Q0)
                num, den = _gamma_parts(f, self.params, 0, alg.n)
                ring = alg.ring(i)
                numv = subst_X(num, view.xs(i), ring)
                denv = subst_X(den, view.xs(i), ring)
                y1 = view.y(i, 1)
                sign = f.one
                if cls0 == "pto":
                    lhs = lhs.mul(y1)
                elif cls0 == "pfrom":
                    lhs = lhs.mul(y1)
                    sign = f.neg(f.one)
                elif cls0 == "pboth":
                    lhs = lhs.mul(y1).mul(y1)
                    sign = f.neg(f.one)
                rec("pair-product", 0, i,
                    lhs.mul(denv).sub(numv.scale(sign)))
            if alg.n >= 2:
                # invariance of the index-0 entry under r_1 r_0 r_1 and of
                # the index-1 entry under r_0 r_1 r_0
                P = self.at(view, 0, i)
                cur = i
                for a in (1, 0, 1):
                    P = alg.transport(a, P, cur)
                    cur = alg.gen_act(a, cur)
                rec("zero-one-compat", 0, i, P.sub(self.at(view, 0, cur)))
                j = alg.gen_act(0, alg.gen_act(1, alg.gen_act(0, i)))
                P = self.at(view, 1, j)
                cur = j
                for a in (0, 1, 0):
                    P = alg.transport(a, P, cur)
                    cur = alg.gen_act(a, cur)
                rec("zero-one-compat", 1, i, P.sub(self.at(view, 1, i)))
        return out


def conditions_ok(report) -> bool:
    return all(r["ok"] for r in report)


# ---------------------------------------------------------------------------
# Generator maps between the two normal-form models
# ---------------------------------------------------------------------------

def _token_blocks(alg, tokens):
    """Block required at each token position (right-to-left pullback of
    the idempotent filters); None entries mean unconstrained, and a
    conflicting pair of filters returns None for the whole term."""
    req = None
    out = [None] * len(tokens)
    for t in range(len(tokens) - 1, -1, -1):
        tok = tokens[t]
        if tok[0] == "e":
            blk = tuple(alg.field.of(x) for x in tok[1])
            if req is None:
                req = blk
            elif req != blk:
                return None
        elif tok[0] == "g" and req is not None:
            req = alg.gen_act(tok[1], req)
        out[t] = req
    return out


class GeneratorMap:
    """A source-to-target map given by generator images.

    Subclasses provide token_image(token, block); the generic machinery
    pushes token expressions and normal-form elements through the map
    and certifies relators.  The target here is a normal-form algebra
    with a computed closure (for zero tests in the quotient).
    """

    def __init__(self, source: NFAlgebra, target: NFAlgebra,
                 target_closure: ClosureResult = None):
        self.source = source
        self.target = target
        self.closure = target_closure
        self._img_cache: dict = {}

    def token_image(self, token, block):
        raise NotImplementedError

    def _coeff_elem(self, fn):
        """Element sum_i fn(i) e(i) over the blocks where fn is defined."""
        out: dict = {}
        ident = self.target.weyl.identity
        for i in self.target.blocks:
            try:
                P = fn(i)
            except UndefinedOnBlock:
                continue
            for exp, c in P.coeffs.items():
                out[(ident, i, exp)] = c
        return out

    def _coeff_elem_at(self, P: TruncPoly, blk: tuple) -> dict:
        ident = self.target.weyl.identity
        return {(ident, blk, exp): c for exp, c in P.coeffs.items()}

    def image_term(self, tokens) -> dict:
        blocks = _token_blocks(self.source, tokens)
        if blocks is None:
            return {}
        # terms passing through a block whose ring is truncated to zero
        # are zero in the source; their coefficients need not be defined
        for blk in blocks:
            if blk is not None and self.source.ring(blk).one().is_zero():
                return {}
        cur = self.target.unit()
        for tok, blk in zip(tokens, blocks):
            img = self.cached_image(tok, blk)
            cur = self.target.rmul_elem(cur, img)
            if not cur:
                break
        return cur

    def cached_image(self, tok, blk):
        key = (tok if tok[0] != "c" else ("c", id(tok[1])), blk)
        if key not in self._img_cache:
            self._img_cache[key] = self.token_image(tok, blk)
        return self._img_cache[key]

    def image_expr(self, expr) -> dict:
        f = self.target.field
        total: dict = {}
        for scalar, tokens in expr:
            elem_add_into(f, total, self.image_term(tokens), f.of(scalar))
        return total

    def image_elem(self, elem: dict) -> dict:
        """Push a source normal-form element through the map."""
        f = self.target.field
        total: dict = {}
        for (w, i, exp), c in elem.items():
            tokens = tuple(("g", a) for a in self.source.weyl.word(w))
            tokens += (("m", exp), ("e", i))
            elem_add_into(f, total, self.image_term(tokens), c)
        return total

    def is_zero(self, elem: dict) -> bool:
        if self.closure is not None:
            return self.closure.is_zero_mod_ideal(elem)
        return not elem


class GradedToDeformed(GeneratorMap):
    """y_k -> f(1 - i_k^{-1}X_k),  crossing_a -> crossing_a * inverse
    coupling entry, blockwise."""

    def __init__(self, source: NFAlgebra, target: NFAlgebra,
                 coupler: Coupler, f: Series1, target_closure=None,
                 drop_coupling: bool = False):
        super().__init__(source, target, target_closure)
        self.coupler = coupler
        self.view = ModelView(target, f)
        self.drop_coupling = drop_coupling

    def token_image(self, token, blk):
        kind = token[0]
        tgt = self.target
        if kind == "e":
            return tgt.idem(tuple(tgt.field.of(x) for x in token[1]))
        if kind == "g":
            a = token[1]
            if self.drop_coupling:
                return tgt.rmul_gen(tgt.unit(), a)
            expr = [(1, (("g", a),
                         ("c", lambda i, a=a:
                          self.coupler.inv_at(self.view, a, i), "cpl-inv")))]
            return tgt.eval_expr(expr)
        if kind == "m":
            exp = token[1]

            def fn(i, exp=exp):
                P = tgt.ring(i).one()
                for k, e in enumerate(exp, start=1):
                    for _ in range(e):
                        P = P.mul(self.view.y(i, k))
                return P
            if blk is not None:
                return self._coeff_elem_at(fn(blk), blk)
            return self._coeff_elem(fn)
        if kind == "c":
            fn = token[1]
            if blk is None:
                raise ValueError("coefficient token without a block filter")
            P = fn(blk)

            def sub(i, P=P):
                ring = tgt.ring(i)
                out = ring.zero()
                for exp, c in P.coeffs.items():
                    term = ring.const(c)
                    for k, e in enumerate(exp, start=1):
                        for _ in range(e):
                            term = term.mul(self.view.y(i, k))
                    out = out.add(term)
                return out
            return self._coeff_elem_at(sub(blk), blk)
        raise ValueError("unknown token %r" % (token,))


class DeformedToGraded(GeneratorMap):
    """X_k -> i_k(1 - g(y_k)),  crossing_a -> crossing_a * coupling
    entry, blockwise."""

    def __init__(self, source: NFAlgebra, target: NFAlgebra,
                 coupler: Coupler, f: Series1, target_closure=None):
        super().__init__(source, target, target_closure)
        self.coupler = coupler
        self.view = ModelView(target, f)

    def _xpow(self, i, k, e) -> TruncPoly:
        base = self.view.x(i, k) if e >= 0 else self.view.xinv(i, k)
        return base.pow(abs(e))

    def token_image(self, token, blk):
        kind = token[0]
        tgt = self.target
        if kind == "e":
            return tgt.idem(tuple(tgt.field.of(x) for x in token[1]))
        if kind == "g":
            a = token[1]
            expr = [(1, (("g", a),
                         ("c", lambda i, a=a:
                          self.coupler.at(self.view, a, i), "cpl")))]
            return tgt.eval_expr(expr)
        if kind == "x":
            exp = token[1]

            def fn(i, exp=exp):
                P = tgt.ring(i).one()
                for k, e in enumerate(exp, start=1):
                    if e:
                        P = P.mul(self._xpow(i, k, e))
                return P
            if blk is not None:
                return self._coeff_elem_at(fn(blk), blk)
            return self._coeff_elem(fn)
        if kind == "m":
            exp = token[1]

            def fn(i, exp=exp):
                ring = tgt.ring(i)
                P = ring.one()
                for k, e in enumerate(exp, start=1):
                    dev = self.view.x(i, k).sub(ring.const(i[k - 1]))
                    for _ in range(e):
                        P = P.mul(dev)
                return P
            if blk is not None:
                return self._coeff_elem_at(fn(blk), blk)
            return self._coeff_elem(fn)
        if kind == "c":
            fn = token[1]
            if blk is None:
                raise ValueError("coefficient token without a block filter")
            P = fn(blk)
            ring = tgt.ring(blk)
            images = {k: self.view.x(blk, k).sub(ring.const(blk[k - 1]))
                      for k in range(1, tgt.n + 1)}
            return self._coeff_elem_at(P.subst(images, ring), blk)
        raise ValueError("unknown token %r" % (token,))


class RescalingAutomorphism(GeneratorMap):
    """The self-map of the graded model attached to a change of variable:
    y_k -> f(y_k), crossings rescaled by the three-case diagonal table."""

    def __init__(self, alg: NFAlgebra, f: Series1, closure=None):
        super().__init__(alg, alg, closure)
        need = required_series_order(alg)
        if f.order < need:
            raise ValueError("series order too small")
        self.f = f

    def _scale(self, a: int, i: tuple) -> TruncPoly:
        fld = self.target.field
        ring = self.target.ring(i)
        if ring.one().is_zero():
            return ring.zero()
        if a == 0:
            raise ValueError("rescaling family is defined for indices >= 1")
        ik, ik1 = i[a - 1], i[a]
        ya, ya1 = ring.var(a), ring.var(a + 1)
        if ik == ik1:
            return series_diff_quotient(self.f, ya, ya1).inv()
        cls = arrow_class(fld, self.target.params, ik, ik1)
        if cls in ("perp", "from"):
            return ring.one()
        return series_diff_quotient(self.f, ya, ya1)

    def token_image(self, token, blk):
        tgt = self.target
        kind = token[0]
        if kind == "e":
            return tgt.idem(tuple(tgt.field.of(x) for x in token[1]))
        if kind == "g":
            a = token[1]
            expr = [(1, (("g", a),
                         ("c", lambda i, a=a: self._scale(a, i), "rsc")))]
            return tgt.eval_expr(expr)
        if kind == "m":
            exp = token[1]

            def fn(i, exp=exp):
                ring = tgt.ring(i)
                P = ring.one()
                for k, e in enumerate(exp, start=1):
                    img = self.f.eval_trunc(ring.var(k))
                    for _ in range(e):
                        P = P.mul(img)
                return P
            if blk is not None:
                return self._coeff_elem_at(fn(blk), blk)
            return self._coeff_elem(fn)
        if kind == "c":
            fn = token[1]
            if blk is None:
                raise ValueError("coefficient token without a block filter")
            P = fn(blk)
            ring = tgt.ring(blk)
            images = {k: self.f.eval_trunc(ring.var(k))
                      for k in range(1, tgt.n + 1)}
            return self._coeff_elem_at(P.subst(images, ring), blk)
        raise ValueError("unknown token %r" % (token,))


# ---------------------------------------------------------------------------
# Maps between the deformed model and the Hecke-type quotient
# ---------------------------------------------------------------------------

class HeckeToDeformed(GeneratorMap):
    """Images of the finite Hecke-type generators inside the deformed
    model: X_k -> X_k and each braid generator acquires a blockwise
    resolvent correction.  Certifying its relator images (including the
    cyclotomic one) shows the map factors through the quotient."""

    def __init__(self, source: HeckeQuotient, target: NFAlgebra,
                 target_closure=None):
        # the source here is not a normal-form algebra; the tokens of its
        # relators are only ('g', a) and ('x', exp), so the generic block
        # pullback is never consulted
        super().__init__(target, target, target_closure)
        self.hecke = source

    def token_image(self, token, blk):
        tgt = self.target
        f = tgt.field
        kind = token[0]
        if kind == "x":
            return tgt.rmul_token(tgt.unit(), ("x", token[1]))
        if kind == "g":
            a = token[1]
            qa = qa_value(tgt.params, a)
            dq = f.sub(qa, f.inv(qa))
            neg_al = tuple(-e for e in alpha_exp(a, tgt.n))
            out = tgt.rmul_gen(tgt.unit(), a)
            ident = tgt.weyl.identity
            for i in tgt.blocks:
                ring = tgt.ring(i)
                if ring.one().is_zero():
                    continue
                if tgt.gen_act(a, i) != i:
                    br = tgt.blockring(i)
                    res = br.one_minus_xpow(neg_al)
                    coeff = br.unit_inv(res, "resolvent").scale(dq)
                    elem_add_into(f, out, self._coeff_elem_at(coeff, i))
                else:
                    elem_add_into(f, out, tgt.idem(i), f.neg(f.inv(qa)))
            return out
        raise ValueError("unknown token %r" % (token,))


class DeformedToHecke:
    """Images of the deformed-model generators as exact matrices in the
    right regular representation of the Hecke-type quotient.

    Idempotents go to the spectral projectors, X's to themselves dressed
    by the orbit projector, and braid generators lose their resolvent
    corrections.  Token products are realized in reversed matrix order
    (right multiplication is an anti-representation)."""

    def __init__(self, source: NFAlgebra, hclosure: HeckeClosure,
                 hblocks: HeckeBlocks):
        self.source = source
        self.hclo = hclosure
        self.hblocks = hblocks
        self.field = source.field
        self.dim = hclosure.dim
        res = hblocks.residue_idempotents()
        self.proj = {}
        for i in source.blocks:
            key = tuple(i)
            self.proj[key] = res.get(key, mat_zero(self.field, self.dim))
        self.orbit_proj = mat_zero(self.field, self.dim)
        for i in source.blocks:
            self.orbit_proj = mat_add(self.field, self.orbit_proj,
                                      self.proj[tuple(i)])
        self._img_cache: dict = {}
        self._resolvent_cache: dict = {}

    def required_truncation(self) -> int:
        """Largest nilpotency index of the deviations on the spectral
        blocks; the deformed model must be truncated at or above it."""
        return max((s for r in self.hblocks.roots for s in r.values()),
                   default=1)

    def xmat(self, vec) -> list:
        return self.hclo.rmul_matrix(("x", tuple(vec)))

    def _deviation(self, k: int, i: tuple) -> list:
        f = self.field
        vec = tuple(1 if t == k - 1 else 0 for t in range(self.source.n))
        return mat_add(f, self.xmat(vec),
                       mat_scale(f, mat_identity(f, self.dim),
                                 f.neg(i[k - 1])))

    def blockwise_inverse(self, A: list, i: tuple) -> list:
        """Inverse of A on the image of the spectral projector of block i
        (A must commute with it and be invertible there)."""
        f = self.field
        E = self.proj[tuple(i)]
        ident = mat_identity(f, self.dim)
        B = mat_add(f, mat_mul(f, A, E),
                    mat_add(f, ident, mat_scale(f, E, f.neg(f.one))))
        return mat_mul(f, mat_inv(f, B), E)

    def _poly_matrix(self, P: TruncPoly, i: tuple) -> list:
        """A truncated polynomial in the deviations, as a matrix on the
        spectral block of i."""
        f = self.field
        out = mat_zero(f, self.dim)
        devs = {}
        for exp, c in P.coeffs.items():
            term = self.proj[tuple(i)]
            for k, e in enumerate(exp, start=1):
                if not e:
                    continue
                if k not in devs:
                    devs[k] = self._deviation(k, i)
                for _ in range(e):
                    term = mat_mul(f, devs[k], term)
            out = mat_add(f, out, mat_scale(f, term, c))
        return out

    def token_image(self, token, blk):
        key = (token if token[0] != "c" else ("c", id(token[1])), blk)
        if key in self._img_cache:
            return self._img_cache[key]
        f = self.field
        src = self.source
        kind = token[0]
        if kind == "e":
            i = tuple(f.of(x) for x in token[1])
            val = self.proj.get(i, mat_zero(f, self.dim))
        elif kind == "x":
            val = mat_mul(f, self.orbit_proj, self.xmat(token[1]))
        elif kind == "m":
            val = mat_zero(f, self.dim)
            blocks = [blk] if blk is not None else src.blocks
            for i in blocks:
                P = src.ring(i).monomial(token[1], 1)
                val = mat_add(f, val, self._poly_matrix(P, i))
        elif kind == "c":
            if blk is None:
                raise ValueError("coefficient token without a block filter")
            val = self._poly_matrix(token[1](blk), blk)
        elif kind == "g":
            a = token[1]
            qa = qa_value(src.params, a)
            dq = f.sub(qa, f.inv(qa))
            neg_al = tuple(-e for e in alpha_exp(a, src.n))
            val = mat_mul(f, self.orbit_proj,
                          self.hclo.rmul_matrix(("g", a)))
            ident = mat_identity(f, self.dim)
            res = mat_add(f, ident,
                          mat_scale(f, self.xmat(neg_al), f.neg(f.one)))
            for i in src.blocks:
                E = self.proj[tuple(i)]
                if src.gen_act(a, i) != i:
                    inv = self.blockwise_inverse(res, i)
                    val = mat_add(f, val, mat_scale(f, inv, f.neg(dq)))
                else:
                    val = mat_add(f, val, mat_scale(f, E, f.inv(qa)))
        else:
            raise ValueError("unknown token %r" % (token,))
        self._img_cache[key] = val
        return val

    def image_term(self, tokens) -> list:
        blocks = _token_blocks(self.source, tokens)
        if blocks is None:
            return mat_zero(self.field, self.dim)
        # terms passing through a block whose ring is truncated to zero
        # are zero in the source; their coefficients need not be defined
        for blk in blocks:
            if blk is not None and self.source.ring(blk).one().is_zero():
                return mat_zero(self.field, self.dim)
        # the unit of the deformed model lands on the orbit projector
        cur = self.orbit_proj
        for tok, blk in zip(tokens, blocks):
            cur = mat_mul(self.field, self.token_image(tok, blk), cur)
            if mat_is_zero(self.field, cur):
                break
        return cur

    def image_expr(self, expr) -> list:
        f = self.field
        total = mat_zero(f, self.dim)
        for scalar, tokens in expr:
            total = mat_add(f, total, self.image_term(tokens), f.of(scalar))
        return total

    def is_zero(self, mat) -> bool:
        return mat_is_zero(self.field, mat)


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------

def verify_generator_map(gmap, labeled_relators):
    """Push every source relator through the map and test for zero in
    the target; returns (all_ok, [(name, ok), ...])."""
    report = []
    ok_all = True
    for name, expr in labeled_relators:
        img = gmap.image_expr(expr)
        ok = gmap.is_zero(img)
        ok_all = ok_all and ok
        report.append((name, ok))
    return ok_all, report


def roundtrip_ok(fwd, back, closure_src) -> bool:
    """back(fwd(x)) = x for every source generator, in the source quotient.

    fwd maps the source normal-form model into the other one; back maps
    it back; closure_src supplies the zero test."""
    src = fwd.source
    f = src.field
    probes = []
    for a in src.weyl.gens:
        probes.append(src.rmul_gen(src.unit(), a))
    for k in range(1, src.n + 1):
        exp = tuple(1 if t == k - 1 else 0 for t in range(src.n))
        if src.kind == "poly":
            probes.append(src.rmul_token(src.unit(), ("m", exp)))
        else:
            probes.append(src.rmul_token(src.unit(), ("x", exp)))
    for i in src.blocks:
        probes.append(src.idem(i))
    for x in probes:
        img = back.image_elem(fwd.image_elem(x))
        diff = dict(img)
        elem_add_into(f, diff, x, f.neg(f.one))
        if not closure_src.is_zero_mod_ideal(diff):
            return False
    return True


# ---------------------------------------------------------------------------
# Intertwining elements of the Hecke-type quotient
# ---------------------------------------------------------------------------

def intertwiner(h: HeckeQuotient, a: int) -> dict:
    """U_a = g_a (1 - X^{-alpha_a}) - (q_a - q_a^{-1}), in normal form."""
    f = h.field
    qa = h.qa(a)
    neg_al = tuple(-e for e in alpha_exp(a, h.n))
    ga = h.rmul_gen(h.unit(), a)
    out = dict(ga)
    elem_add_into(f, out, h.rmul_x(ga, neg_al), f.neg(f.one))
    elem_add_into(f, out, h.unit(), f.neg(f.sub(qa, f.inv(qa))))
    return out


def intertwiner_checks(hclo: HeckeClosure, a: int) -> dict:
    """The two defining identities of the intertwiner, in the quotient:
    the exchange identity with every X^{±eps_k} and the square formula
    (q_a - q_a^{-1}X^{alpha_a})(q_a - q_a^{-1}X^{-alpha_a})."""
    h = hclo.alg
    f = h.field
    qa = h.qa(a)
    al = alpha_exp(a, h.n)
    neg_al = tuple(-e for e in al)
    from .heckeengine import rmul_elem_hecke
    U = intertwiner(h, a)
    out = {}
    ok = True
    for k in range(1, h.n + 1):
        for s in (1, -1):
            x = tuple(s if t == k - 1 else 0 for t in range(h.n))
            rx = gen_act_lattice(a, x)
            lhs = h.rmul_x(U, x)
            rhs = rmul_elem_hecke(h, h.rmul_x(h.unit(), rx), U)
            diff = dict(lhs)
            elem_add_into(f, diff, rhs, f.neg(f.one))
            ok = ok and not hclo.ideal.normal_form(diff)
    out["exchange"] = ok
    lhs = rmul_elem_hecke(h, U, U)
    # (q_a - q_a^{-1}X^{al})(q_a - q_a^{-1}X^{-al})
    rhs: dict = {}
    elem_add_into(f, rhs, h.unit(), f.mul(qa, qa))
    elem_add_into(f, rhs, h.rmul_x(h.unit(), al), f.neg(f.one))
    elem_add_into(f, rhs, h.rmul_x(h.unit(), neg_al), f.neg(f.one))
    elem_add_into(f, rhs, h.unit(),
                  f.mul(f.inv(qa), f.inv(qa)))
    diff = dict(lhs)
    elem_add_into(f, diff, rhs, f.neg(f.one))
    out["square"] = not hclo.ideal.normal_form(diff)
    return out
