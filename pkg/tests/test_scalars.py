from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quiverhecke.scalars import (FieldCtx, Params, FieldError, order_e,
                                 offset_e_prime, lambda_class, in_pm_power)


def test_parse():
    assert FieldCtx.parse("Fp:13").char == 13
    assert FieldCtx.parse("Q").char == 0
    with pytest.raises(FieldError):
        FieldCtx.parse("Fp:2")
    with pytest.raises(FieldError):
        FieldCtx.parse("Fp:4")
    with pytest.raises(FieldError):
        FieldCtx.parse("octonions")


def test_of_and_arithmetic_fp():
    f = FieldCtx(13)
    assert f.of(-1) == 12
    assert f.of("1/2") == f.mul(f.of(1), f.inv(f.of(2)))
    assert f.add(f.of(7), f.of(9)) == f.of(3)
    assert f.pow(f.of(2), -1) == f.inv(f.of(2))
    with pytest.raises(ZeroDivisionError):
        f.inv(f.zero)


def test_of_and_arithmetic_q():
    f = FieldCtx(0)
    assert f.of("3/4") == Fraction(3, 4)
    assert f.div(f.of(1), f.of(3)) == Fraction(1, 3)
    assert f.pow(f.of(2), -2) == Fraction(1, 4)


@given(st.integers(0, 12), st.integers(0, 12), st.integers(1, 12))
def test_field_axioms_f13(a, b, c):
    f = FieldCtx(13)
    a, b, c = f.of(a), f.of(b), f.of(c)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(c, f.inv(c)) == f.one
    assert f.sub(a, b) == f.add(a, f.neg(b))


def test_params_validation():
    f = FieldCtx(13)
    with pytest.raises(FieldError):
        Params(f, 1, 2)        # p² = 1
    with pytest.raises(FieldError):
        Params(f, 12, 2)       # (-1)² = 1
    with pytest.raises(FieldError):
        Params(f, 5, 0)
    Params(f, 5, 2)


def test_order_e():
    f = FieldCtx(13)
    assert order_e(Params(f, 5, 2)) == 6      # ord(4) in F13*
    assert order_e(Params(f, 5, 5)) == 2      # 5² = -1
    fq = FieldCtx(0)
    assert order_e(Params(fq, 3, 2)) is None


def test_e_prime_and_lambda_class():
    f = FieldCtx(13)
    pr = Params(f, 5, 2)
    e = order_e(pr)
    # 5 = 2^9; e' = 9 mod 6 = 3
    assert offset_e_prime(pr, e) == 3
    assert lambda_class(pr, 1) == "a"
    assert lambda_class(pr, 4) == "a"
    assert lambda_class(pr, 2) == "b"


def test_in_pm_power():
    f = FieldCtx(13)
    assert in_pm_power(f, f.of(4), f.of(1)) is not None
    assert in_pm_power(f, f.of(4), f.of(3)) is not None   # 3 = 4²·... 16=3
    fq = FieldCtx(0)
    assert in_pm_power(fq, fq.of(2), fq.of(8)) == 3
    assert in_pm_power(fq, fq.of(2), fq.of(3)) is None
