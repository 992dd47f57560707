"""Truncated multivariate polynomials, one-variable series, block evaluation.

Everything downstream computes inside rings
K[v_1,...,v_n] / (v_1^{t_1}, ..., v_n^{t_n})
with exact field coefficients.  For the polynomial-generator presentations
the v_k are the degree-2 generators themselves; for the Laurent-generator
presentations v_k = X_k - i_k is the deviation of X_k from its block value
i_k, so X_k = i_k + v_k is a unit and arbitrary Laurent expressions can be
evaluated per block (raising UndefinedOnBlock when a denominator is not a
unit there).
"""

from __future__ import annotations

from .scalars import FieldCtx, Params


class UndefinedOnBlock(ArithmeticError):
    """A rational coefficient expression has a non-unit denominator here."""


# ---------------------------------------------------------------------------
# Truncated polynomials
# ---------------------------------------------------------------------------

class TruncRing:
    """K[v_1..v_n] modulo v_k^{bounds[k]} for each k."""

    def __init__(self, field: FieldCtx, bounds: tuple):
        self.field = field
        self.bounds = tuple(int(b) for b in bounds)
        self.nvars = len(self.bounds)

    def __eq__(self, other):
        return (isinstance(other, TruncRing) and other.field == self.field
                and other.bounds == self.bounds)

    def __hash__(self):
        return hash((self.field, self.bounds))

    def zero(self) -> "TruncPoly":
        return TruncPoly(self, {})

    def const(self, c) -> "TruncPoly":
        c = self.field.of(c)
        # a dead variable (bound 0) kills the whole ring: 1 = v^0 = 0
        if self.field.is_zero(c) or 0 in self.bounds:
            return TruncPoly(self, {})
        return TruncPoly(self, {(0,) * self.nvars: c})

    def one(self) -> "TruncPoly":
        return self.const(1)

    def var(self, k: int) -> "TruncPoly":
        """The variable v_k, k = 1..nvars."""
        exp = [0] * self.nvars
        exp[k - 1] = 1
        return self.monomial(tuple(exp), 1)

    def monomial(self, exp: tuple, c) -> "TruncPoly":
        c = self.field.of(c)
        if self.field.is_zero(c) or any(e >= b for e, b in zip(exp, self.bounds)):
            return self.zero()
        return TruncPoly(self, {tuple(exp): c})


class TruncPoly:
    """Immutable-by-convention truncated polynomial: {exp tuple: scalar}."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: TruncRing, coeffs: dict):
        self.ring = ring
        self.coeffs = coeffs

    # -- basics ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, TruncPoly) and other.ring == self.ring
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.ring, frozenset(self.coeffs.items())))

    def constant_term(self):
        return self.coeffs.get((0,) * self.ring.nvars, self.ring.field.zero)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for exp in sorted(self.coeffs):
            mono = "*".join("v%d^%d" % (k + 1, e)
                            for k, e in enumerate(exp) if e) or "1"
            bits.append("%s*%s" % (self.coeffs[exp], mono))
        return " + ".join(bits)

    # -- arithmetic -----------------------------------------------------
    def add(self, other: "TruncPoly") -> "TruncPoly":
        f = self.ring.field
        out = dict(self.coeffs)
        for exp, c in other.coeffs.items():
            s = f.add(out.get(exp, f.zero), c)
            if f.is_zero(s):
                out.pop(exp, None)
            else:
                out[exp] = s
        return TruncPoly(self.ring, out)

    def neg(self) -> "TruncPoly":
        f = self.ring.field
        return TruncPoly(self.ring, {e: f.neg(c) for e, c in self.coeffs.items()})

    def sub(self, other: "TruncPoly") -> "TruncPoly":
        return self.add(other.neg())

    def scale(self, c) -> "TruncPoly":
        f = self.ring.field
        c = f.of(c)
        if f.is_zero(c):
            return self.ring.zero()
        return TruncPoly(self.ring, {e: f.mul(v, c) for e, v in self.coeffs.items()})

    def mul(self, other: "TruncPoly") -> "TruncPoly":
        f = self.ring.field
        bounds = self.ring.bounds
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                if any(e >= b for e, b in zip(exp, bounds)):
                    continue
                s = f.add(out.get(exp, f.zero), f.mul(c1, c2))
                if f.is_zero(s):
                    out.pop(exp, None)
                else:
                    out[exp] = s
        return TruncPoly(self.ring, out)

    def pow(self, n: int) -> "TruncPoly":
        if n < 0:
            return self.inv().pow(-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result.mul(base)
            base = base.mul(base)
            n >>= 1
        return result

    def is_unit(self) -> bool:
        return not self.ring.field.is_zero(self.constant_term()) \
            and 0 not in self.ring.bounds

    def inv(self) -> "TruncPoly":
        """Inverse of a unit: c(1+u) with u nilpotent."""
        f = self.ring.field
        c = self.constant_term()
        if f.is_zero(c):
            raise UndefinedOnBlock("inverting a non-unit")
        u = self.scale(f.inv(c)).sub(self.ring.one())
        out = self.ring.one()
        term = self.ring.one()
        while True:
            term = term.mul(u).neg()
            if term.is_zero():
                break
            out = out.add(term)
        return out.scale(f.inv(c))

    # -- substitution and variable maps ----------------------------------
    def subst(self, images: dict, ring: TruncRing = None) -> "TruncPoly":
        """Substitute v_k -> images[k] (TruncPoly in `ring`); identity else."""
        ring = ring or self.ring
        out = ring.zero()
        for exp, c in self.coeffs.items():
            term = ring.const(c)
            for k, e in enumerate(exp, start=1):
                if not e:
                    continue
                img = images.get(k)
                if img is None:
                    img = ring.var(k)
                term = term.mul(img.pow(e))
            out = out.add(term)
        return out

    def map_exponents(self, fn) -> "TruncPoly":
        """Apply (exp, c) -> (exp', c'); exponents must stay in bounds."""
        f = self.ring.field
        out: dict = {}
        for exp, c in self.coeffs.items():
            exp2, c2 = fn(exp, c)
            if f.is_zero(c2) or any(e >= b for e, b in zip(exp2, self.ring.bounds)):
                continue
            s = f.add(out.get(exp2, f.zero), c2)
            if f.is_zero(s):
                out.pop(exp2, None)
            else:
                out[exp2] = s
        return TruncPoly(self.ring, out)

    def swap_vars(self, i: int, j: int) -> "TruncPoly":
        i, j = i - 1, j - 1

        def fn(exp, c):
            e = list(exp)
            e[i], e[j] = e[j], e[i]
            return tuple(e), c
        return self.map_exponents(fn)

    def negate_var(self, k: int) -> "TruncPoly":
        f = self.ring.field

        def fn(exp, c):
            return exp, (f.neg(c) if exp[k - 1] % 2 else c)
        return self.map_exponents(fn)

    def div_var(self, k: int) -> "TruncPoly":
        """Exact division by v_k; raises if any monomial lacks v_k."""
        if any(exp[k - 1] == 0 for exp in self.coeffs):
            raise ArithmeticError("not divisible by v_%d" % k)

        def fn(exp, c):
            e = list(exp)
            e[k - 1] -= 1
            return tuple(e), c
        return self.map_exponents(fn)

    def subst_var_value(self, k: int, value: "TruncPoly") -> "TruncPoly":
        return self.subst({k: value})

    def div_diff_pair(self, i: int, j: int) -> "TruncPoly":
        """Canonical Q with Q*(v_j - v_i) = self, by synthetic division.

        The remainder self|_{v_j=v_i} must vanish in the ring (true for
        differences P - swap(P)); raises otherwise.
        """
        ring = self.ring
        degj = max((exp[j - 1] for exp in self.coeffs), default=0)
        # coefficients of v_j^d as polynomials in the other variables
        layers = [ring.zero() for _ in range(degj + 1)]
        for exp, c in self.coeffs.items():
            e = list(exp)
            d = e[j - 1]
            e[j - 1] = 0
            layers[d] = layers[d].add(ring.monomial(tuple(e), c))
        vi = ring.var(i)
        q = [ring.zero()] * (degj + 1)
        carry = ring.zero()
        for d in range(degj, 0, -1):
            q[d - 1] = layers[d].add(carry)
            carry = vi.mul(q[d - 1])
        remainder = layers[0].add(carry)
        if not remainder.is_zero():
            raise ArithmeticError("division by (v_%d - v_%d) is not exact" % (j, i))
        vj = ring.var(j)
        out = ring.zero()
        for d in range(degj):
            out = out.add(q[d].mul(vj.pow(d)))
        return out


# ---------------------------------------------------------------------------
# Polynomial-model reflection actions and divided differences
# ---------------------------------------------------------------------------

def weyl_act_poly(P: TruncPoly, a: int) -> TruncPoly:
    """Reflection action on polynomial coefficients: a=0 negates v_1,
    a>=1 swaps v_a, v_{a+1}."""
    if a == 0:
        return P.negate_var(1)
    return P.swap_vars(a, a + 1)


def word_act_poly(P: TruncPoly, word) -> TruncPoly:
    for a in reversed(word):
        P = weyl_act_poly(P, a)
    return P


def divided_difference(P: TruncPoly, b: int) -> TruncPoly:
    """(P - r_b P)/(v_{b+1} - v_b) for b >= 1."""
    return P.sub(weyl_act_poly(P, b)).div_diff_pair(b, b + 1)


def divided_difference0(P: TruncPoly) -> TruncPoly:
    """(P - r_0 P)/v_1 (the numerator is odd in v_1)."""
    return P.sub(P.negate_var(1)).div_var(1)


# ---------------------------------------------------------------------------
# One-variable series
# ---------------------------------------------------------------------------

class Series1:
    """A truncated power series in one variable: coeffs[k] is the z^k
    coefficient; the series is known modulo z^len(coeffs)."""

    def __init__(self, field: FieldCtx, coeffs):
        self.field = field
        self.coeffs = [field.of(c) for c in coeffs]

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int):
        return self.coeffs[k] if k < len(self.coeffs) else self.field.zero

    def __eq__(self, other):
        return (isinstance(other, Series1) and other.field == self.field
                and other.coeffs == self.coeffs)

    def __repr__(self):
        return "Series1(%s)" % (self.coeffs,)

    def add(self, other: "Series1") -> "Series1":
        n = min(self.order, other.order)
        f = self.field
        return Series1(f, [f.add(self[k], other[k]) for k in range(n)])

    def sub(self, other: "Series1") -> "Series1":
        n = min(self.order, other.order)
        f = self.field
        return Series1(f, [f.sub(self[k], other[k]) for k in range(n)])

    def scale(self, c) -> "Series1":
        f = self.field
        c = f.of(c)
        return Series1(f, [f.mul(v, c) for v in self.coeffs])

    def mul(self, other: "Series1") -> "Series1":
        n = min(self.order, other.order)
        f = self.field
        out = [f.zero] * n
        for i, a in enumerate(self.coeffs[:n]):
            if f.is_zero(a):
                continue
            for j in range(n - i):
                out[i + j] = f.add(out[i + j], f.mul(a, other[j]))
        return Series1(f, out)

    def inv(self) -> "Series1":
        """Multiplicative inverse; constant term must be nonzero."""
        f = self.field
        if f.is_zero(self[0]):
            raise ArithmeticError("series has no multiplicative inverse")
        n = self.order
        c0 = f.inv(self[0])
        out = [f.zero] * n
        out[0] = c0
        for k in range(1, n):
            s = f.zero
            for j in range(1, k + 1):
                s = f.add(s, f.mul(self[j], out[k - j]))
            out[k] = f.neg(f.mul(c0, s))
        return Series1(f, out)

    def compose(self, inner: "Series1") -> "Series1":
        """self(inner); inner must have zero constant term."""
        f = self.field
        if not f.is_zero(inner[0]):
            raise ArithmeticError("composition needs inner(0) = 0")
        n = min(self.order, inner.order)
        out = Series1(f, [f.zero] * n)
        power = Series1(f, [f.one] + [f.zero] * (n - 1))
        trunc = Series1(f, inner.coeffs[:n])
        for k in range(n):
            out = out.add(power.scale(self[k]))
            power = power.mul(trunc)
        return out

    def comp_inverse(self) -> "Series1":
        """Compositional inverse g with self(g) = z; needs self(0)=0 and
        invertible linear coefficient."""
        f = self.field
        if not f.is_zero(self[0]):
            raise ArithmeticError("compositional inverse needs f(0) = 0")
        if f.is_zero(self[1]):
            raise ArithmeticError("compositional inverse needs f'(0) != 0")
        n = self.order
        g = [f.zero, f.inv(self[1])]
        for m in range(2, n):
            trial = Series1(f, g + [f.zero])
            err = self.compose(trial)[m]
            g.append(f.neg(f.div(err, self[1])))
        return Series1(f, g)

    def eval_trunc(self, P: TruncPoly) -> TruncPoly:
        """self(P) for P with nilpotent (zero-constant-term) argument."""
        f = self.field
        if not f.is_zero(P.constant_term()):
            raise ArithmeticError("series evaluation needs a nilpotent argument")
        ring = P.ring
        out = ring.const(self[0])
        power = ring.one()
        for k in range(1, self.order):
            power = power.mul(P)
            if power.is_zero():
                break
            out = out.add(power.scale(self[k]))
        return out


def series_f(field: FieldCtx, order: int) -> Series1:
    """The pinned change of variable f(z) = z + z/(1-z) = 2z + z² + z³ + ..."""
    coeffs = [field.zero, field.of(2)] + [field.one] * max(0, order - 2)
    return Series1(field, coeffs[:order])


def series_identity(field: FieldCtx, order: int) -> Series1:
    return Series1(field, [field.zero, field.one] + [field.zero] * (order - 2))


def check_lemma_fg(field: FieldCtx, order: int) -> bool:
    """For g the compositional inverse of the pinned f:
    1 - g(-z) = 1/(1 - g(z)) as series modulo z^order."""
    g = series_f(field, order).comp_inverse()
    gneg = Series1(field, [field.mul(c, field.pow(field.of(-1), k))
                           for k, c in enumerate(g.coeffs)])
    one = Series1(field, [field.one] + [field.zero] * (order - 1))
    lhs = one.sub(gneg)
    rhs = one.sub(g).inv()
    return lhs == rhs


# ---------------------------------------------------------------------------
# Laurent exponent helpers (weight lattice monomials X^x)
# ---------------------------------------------------------------------------

def refl_exp(a: int, x: tuple) -> tuple:
    if a == 0:
        return (-x[0],) + x[1:]
    y = list(x)
    y[a - 1], y[a] = y[a], y[a - 1]
    return tuple(y)


def alpha_exp(a: int, n: int) -> tuple:
    v = [0] * n
    if a == 0:
        v[0] = 2
    else:
        v[a - 1], v[a] = -1, 1
    return tuple(v)


def geom_ratio_terms(x: tuple, a: int, n: int):
    """(X^x - X^{r_a x})/(1 - X^{-α_a}) as signed Laurent monomials.

    r_a(x) = x - k α_a; the quotient is X^x Σ_{j=0}^{k-1} X^{-jα_a} for
    k >= 0 and -X^x Σ_{j=1}^{-k} X^{jα_a} for k < 0.
    """
    al = alpha_exp(a, n)
    k = x[0] if a == 0 else x[a] - x[a - 1]
    terms = []
    if k >= 0:
        for j in range(k):
            terms.append((tuple(xi - j * ai for xi, ai in zip(x, al)), 1))
    else:
        for j in range(1, -k + 1):
            terms.append((tuple(xi + j * ai for xi, ai in zip(x, al)), -1))
    return terms


class BlockRing:
    """Evaluation of Laurent expressions in X_1..X_n on one block.

    On the block with residues (i_1..i_n) and deviation bounds t_k, the
    generator X_k is the unit i_k + v_k.  Laurent polynomials are dicts
    {exponent vector: scalar} with integer (possibly negative) entries.
    """

    def __init__(self, field: FieldCtx, block: tuple, bounds: tuple):
        self.field = field
        self.block = tuple(field.of(i) for i in block)
        self.ring = TruncRing(field, bounds)
        self.n = len(block)
        self._xpow: dict = {}

    def xpow(self, k: int, e: int) -> TruncPoly:
        """X_k^e as a truncated polynomial in the deviations."""
        key = (k, e)
        if key not in self._xpow:
            base = self.ring.const(self.block[k - 1]).add(self.ring.var(k))
            self._xpow[key] = base.pow(e) if e >= 0 else base.inv().pow(-e)
        return self._xpow[key]

    def xmono(self, x: tuple) -> TruncPoly:
        out = self.ring.one()
        for k, e in enumerate(x, start=1):
            if e:
                out = out.mul(self.xpow(k, e))
        return out

    def eval_laurent(self, poly: dict) -> TruncPoly:
        out = self.ring.zero()
        for x, c in poly.items():
            out = out.add(self.xmono(x).scale(c))
        return out

    def unit_inv(self, P: TruncPoly, what: str = "expression") -> TruncPoly:
        if not P.is_unit():
            raise UndefinedOnBlock("%s is not a unit on block %s"
                                   % (what, (self.block,)))
        return P.inv()

    def one_minus_xpow(self, x: tuple) -> TruncPoly:
        return self.ring.one().sub(self.xmono(x))


def _neg(x: tuple) -> tuple:
    return tuple(-e for e in x)


def qa_value(params: Params, a: int):
    """The framing parameter of generator a: p for a = 0, else q."""
    return params.p if a == 0 else params.q


def gamma_a(br: BlockRing, params: Params, a: int) -> TruncPoly:
    """Γ_a = (q_a - q_a^{-1}X^{α_a})(q_a - q_a^{-1}X^{-α_a}) /
    ((1-X^{α_a})(1-X^{-α_a})); defined only where both denominators are
    units (r_a does not fix the block)."""
    f = br.field
    qa = qa_value(params, a)
    qai = f.inv(qa)
    al = alpha_exp(a, br.n)
    num = br.ring.const(qa).sub(br.xmono(al).scale(qai)).mul(
        br.ring.const(qa).sub(br.xmono(_neg(al)).scale(qai)))
    den = br.one_minus_xpow(al).mul(br.one_minus_xpow(_neg(al)))
    return num.mul(br.unit_inv(den, "1 - X^{±α_%d}" % a))


def correction_Z(br: BlockRing, params: Params, b: int) -> TruncPoly:
    """Z_b in its pole-free closed form (valid when i_b = i_{b+2} != i_{b+1})."""
    f = br.field
    q = params.q
    qi = f.inv(q)
    n = br.n
    ab = alpha_exp(b, n)
    ab1 = alpha_exp(b + 1, n)
    c2 = f.mul(f.sub(q, qi), f.sub(q, qi))
    absum = tuple(x + y for x, y in zip(ab, ab1))
    num = (br.xmono(_neg(ab1)).sub(br.xmono(_neg(ab)))
           .mul(br.ring.const(q).sub(br.xmono(_neg(absum)).scale(qi)))
           .scale(c2))
    den = br.one_minus_xpow(_neg(ab)).pow(2).mul(
        br.one_minus_xpow(_neg(ab1)).pow(2))
    return num.mul(br.unit_inv(den, "Z_%d denominator" % b))


def correction_Y0(br: BlockRing, params: Params) -> TruncPoly:
    """Y_0 in closed form; needs units 1-X^{-α_1} and 1-X^{-r_0(α_1)}."""
    f = br.field
    q, p = params.q, params.p
    qi, pi = f.inv(q), f.inv(p)
    n = br.n
    a1 = alpha_exp(1, n)
    r0a1 = refl_exp(0, a1)        # ε_2 + ε_1
    r1a0 = refl_exp(1, alpha_exp(0, n))   # 2 ε_2
    c2 = f.mul(f.sub(q, qi), f.sub(q, qi))
    num = (br.xmono(_neg(a1))
           .mul(br.ring.const(p).sub(br.xmono(_neg(r1a0)).scale(pi)))
           .scale(f.neg(c2)))
    den = br.one_minus_xpow(_neg(a1)).pow(2).mul(
        br.one_minus_xpow(_neg(r0a1)).pow(2))
    return num.mul(br.unit_inv(den, "Y_0 denominator"))


def correction_Y1(br: BlockRing, params: Params) -> TruncPoly:
    """Y_1 in closed form; needs units 1-X^{-α_0} and 1-X^{-r_1(α_0)}."""
    f = br.field
    q, p = params.q, params.p
    qi, pi = f.inv(q), f.inv(p)
    n = br.n
    a0 = alpha_exp(0, n)
    a1 = alpha_exp(1, n)
    r0a1 = refl_exp(0, a1)
    r1a0 = refl_exp(1, a0)
    c2 = f.mul(f.sub(p, pi), f.sub(p, pi))
    num = (br.xmono(_neg(a0))
           .mul(br.ring.one().add(br.xmono(_neg(a1))))
           .mul(br.ring.one().add(br.xmono(_neg(r0a1))))
           .mul(br.ring.const(q).sub(br.xmono(_neg(r0a1)).scale(qi)))
           .scale(f.neg(c2)))
    den = br.one_minus_xpow(_neg(a0)).pow(2).mul(
        br.one_minus_xpow(_neg(r1a0)).pow(2))
    return num.mul(br.unit_inv(den, "Y_1 denominator"))


def subst_X(poly: dict, images: dict, ring: TruncRing) -> TruncPoly:
    """Evaluate a Laurent polynomial {exp vector: scalar} with X_k mapped
    to the unit truncated polynomial images[k]."""
    out = ring.zero()
    inv_cache: dict = {}
    for x, c in poly.items():
        term = ring.const(c)
        for k, e in enumerate(x, start=1):
            if not e:
                continue
            img = images[k]
            if e < 0:
                if k not in inv_cache:
                    inv_cache[k] = img.inv()
                term = term.mul(inv_cache[k].pow(-e))
            else:
                term = term.mul(img.pow(e))
        out = out.add(term)
    return out
