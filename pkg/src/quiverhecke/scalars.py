"""Exact ground-field arithmetic and derived parameter invariants.

Two backends: the prime field F_r for an odd prime r, and the rationals.
Elements of F_r are plain ints in range(r); rationals are
fractions.Fraction.  All operations are pure and exact.
"""

from __future__ import annotations

import math
from fractions import Fraction


class FieldError(ValueError):
    pass


def _is_prime(r: int) -> bool:
    if r < 2:
        return False
    if r % 2 == 0:
        return r == 2
    d = 3
    while d * d <= r:
        if r % d == 0:
            return False
        d += 2
    return True


class FieldCtx:
    """A prime field F_r (r an odd prime) or the field of rationals.

    The characteristic-2 case is rejected: the constructions downstream
    divide by 2.
    """

    def __init__(self, char: int = 0):
        if char == 0:
            self.char = 0
            self.kind = "Q"
        else:
            if not _is_prime(char) or char == 2:
                raise FieldError("characteristic must be 0 or an odd prime")
            self.char = char
            self.kind = "Fp"

    @classmethod
    def parse(cls, text: str) -> "FieldCtx":
        text = text.strip()
        if text in ("Q", "QQ", "rationals"):
            return cls(0)
        if text.startswith("Fp:"):
            return cls(int(text[3:]))
        raise FieldError("unrecognized field spec %r" % text)

    # -- element constructors ------------------------------------------
    def of(self, x):
        """Canonicalize an int / Fraction / 'a/b' string into an element."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.char:
            if isinstance(x, Fraction):
                if x.denominator % self.char == 0:
                    raise FieldError("denominator divisible by characteristic")
                return (x.numerator * pow(x.denominator, -1, self.char)) % self.char
            return x % self.char
        if isinstance(x, Fraction):
            return x
        return Fraction(x)

    @property
    def zero(self):
        return self.of(0)

    @property
    def one(self):
        return self.of(1)

    # -- arithmetic ----------------------------------------------------
    def add(self, a, b):
        return (a + b) % self.char if self.char else a + b

    def sub(self, a, b):
        return (a - b) % self.char if self.char else a - b

    def neg(self, a):
        return (-a) % self.char if self.char else -a

    def mul(self, a, b):
        return (a * b) % self.char if self.char else a * b

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.char:
            return pow(a, -1, self.char)
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        if self.char:
            return pow(a, n, self.char)
        return a ** n

    def is_zero(self, a) -> bool:
        return a == self.zero

    def eq(self, a, b) -> bool:
        return a == b

    def elements(self):
        """Iterate all nonzero elements (finite fields only)."""
        if not self.char:
            raise FieldError("cannot enumerate the rationals")
        return range(1, self.char)

    def __repr__(self):
        return "FieldCtx(Q)" if not self.char else "FieldCtx(F%d)" % self.char

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and other.char == self.char

    def __hash__(self):
        return hash(("FieldCtx", self.char))


class Params:
    """The pair of nonzero deformation parameters (p, q), with p², q² ≠ 1."""

    def __init__(self, field: FieldCtx, p, q):
        self.field = field
        self.p = field.of(p)
        self.q = field.of(q)
        one = field.one
        for name, v in (("p", self.p), ("q", self.q)):
            if field.is_zero(v):
                raise FieldError("%s must be nonzero" % name)
            if field.mul(v, v) == one:
                raise FieldError("%s² = 1 is not allowed" % name)

    def __repr__(self):
        return "Params(%r, p=%s, q=%s)" % (self.field, self.p, self.q)


def _mult_order(field: FieldCtx, a):
    """Multiplicative order of a, or None if infinite (rationals, |a| != 1)."""
    if field.char:
        x = a
        for k in range(1, field.char):
            if x == field.one:
                return k
            x = field.mul(x, a)
        raise FieldError("order search failed")  # pragma: no cover
    return 1 if a == field.one else (2 if a == field.of(-1) else None)


def order_e(params: Params):
    """The order e of q² in K*, or None when infinite."""
    f = params.field
    return _mult_order(f, f.mul(params.q, params.q))


def _exp_bound(field: FieldCtx, base, target, cap: int) -> int:
    """Bound B such that target ∈ ±base^Z implies an exponent with |t| <= B.

    Over a finite field the order of base suffices.  Over Q, when |base|
    differs from 1 the magnitudes give an analytic bound; otherwise fall
    back to the configured cap.
    """
    if field.char:
        return _mult_order(field, base)
    h = max(abs(base.numerator), abs(base.denominator))
    if h > 1:
        ht = max(abs(target.numerator), abs(target.denominator), 2)
        return max(1, math.ceil(math.log(ht) / math.log(h)) + 1)
    return cap


def in_pm_power(field: FieldCtx, base, target, step: int = 1, shift: int = 0,
                cap: int = 64):
    """Return an exponent t with target = ±base^(shift + step·t), or None.

    The search is exact; the bound is exact over finite fields and over Q
    with |base| != 1 (see _exp_bound), otherwise capped at `cap`.
    """
    bound = _exp_bound(field, base, target, cap)
    minus = field.neg(target)
    for t in range(-bound - 1, bound + 2):
        v = field.pow(base, shift + step * t)
        if v == target or v == minus:
            return t
    return None


def offset_e_prime(params: Params, e, cap: int = 64):
    """The residue e' with p = ±q^{e'}, canonical in [0, e), or None.

    None means p ∉ ±q^Z (within the documented search bound over Q).
    """
    f = params.field
    t = in_pm_power(f, params.q, params.p, cap=cap)
    if t is None:
        return None
    return t % e if e is not None else t


def lambda_class(params: Params, lam, cap: int = 64) -> str:
    """Classify λ into the four situations a/b/c/d.

    a: λ in the orbit of 1 (λ ∈ ±q^{2Z}); b: orbit of q (λ ∈ ±q^{1+2Z});
    c: orbit of p (λ ∈ ±p^{±1}q^{2Z}, only when p ∉ ±q^Z); d: none of
    these.  The classification is invariant under λ ↦ −λ, λ^{-1}, q²λ.
    """
    f = params.field
    lam = f.of(lam)
    if f.is_zero(lam):
        raise FieldError("λ must be nonzero")
    q2 = f.mul(params.q, params.q)
    if in_pm_power(f, q2, lam, cap=cap) is not None:
        return "a"
    if in_pm_power(f, params.q, lam, step=2, shift=1, cap=cap) is not None:
        # λ = ±q^{2t+1}
        return "b"
    p_in_q = in_pm_power(f, params.q, params.p, cap=cap) is not None
    if not p_in_q:
        for pp in (params.p, f.inv(params.p)):
            if in_pm_power(f, q2, f.div(lam, pp), cap=cap) is not None:
                return "c"
    return "d"
