"""Exact digit arithmetic and valuation bookkeeping."""

from fractions import Fraction

import pytest

from lubintate.valuations import (
    INF,
    LaurentCoeff,
    RamifiedRing,
    Val,
    parse_val,
    valuation_of,
)


def test_val_ordering_and_inf():
    assert Val(Fraction(1, 2)) < Val(Fraction(3, 4))
    assert Val(Fraction(1, 2)) < Val(INF)
    assert Val(INF) == Val(INF)
    assert not Val(INF) < Val(INF)
    assert Val(INF).is_inf
    assert (Val(Fraction(1, 3)) + Val(INF)).is_inf
    assert Val(Fraction(1, 3)) + Val(Fraction(1, 6)) == Val(Fraction(1, 2))


def test_val_scale_positive_only():
    assert Val(Fraction(2, 3)).scale(3) == Val(2)
    assert Val(INF).scale(5).is_inf
    with pytest.raises(ValueError):
        Val(Fraction(1)).scale(0)


def test_val_json_and_parse():
    assert Val(Fraction(3, 4)).json_obj() == {"num": 3, "den": 4}
    assert Val(INF).json_obj() == {"inf": True}
    assert parse_val("3/4") == Val(Fraction(3, 4))
    assert parse_val("inf").is_inf
    assert parse_val("-2") == Val(Fraction(-2))


def test_ring_requires_prime():
    with pytest.raises(ValueError):
        RamifiedRing(4)
    with pytest.raises(ValueError):
        RamifiedRing(1)


def test_unramified_digits_and_carry():
    R = RamifiedRing(2, 1, 12)
    a = R.from_int(12)
    # 12 = 2^2 * 3 = 2^2 + 2^3
    assert a.digit_string() == "0,0,1,1"
    assert a.valuation() == Val(2)
    assert (R.from_int(7) + R.from_int(9)) == R.from_int(16)
    assert (R.from_int(5) * R.from_int(5)) == R.from_int(25)
    assert (-R.from_int(3)) + R.from_int(3) == R.zero()


def test_ramified_carry_crosses_m_digits():
    # u^2 = 3: integer p-powers occupy even slots
    R = RamifiedRing(3, 2, 10)
    u = R.uniformizer(1)
    assert u * u == R.from_int(3)
    assert R.from_int(9).valuation() == Val(2)
    assert u.valuation() == Val(Fraction(1, 2))
    assert (u ** 5).valuation() == Val(Fraction(5, 2))


def test_inverse_of_unit():
    R = RamifiedRing(5, 1, 8)
    x = R.from_int(7)
    assert x * x.inverse() == R.one()
    with pytest.raises(ValueError):
        R.from_int(5).inverse()  # not a unit


def test_from_rational_matches_quotient():
    R = RamifiedRing(3, 1, 9)
    x = R.from_rational(Fraction(7, 5))
    assert x * R.from_int(5) == R.from_int(7)
    with pytest.raises(ValueError):
        R.from_rational(Fraction(1, 3))  # denominator not a unit


def test_below_precision_flag():
    R = RamifiedRing(2, 1, 12)
    big = R.from_int(2 ** 12)
    assert big.is_zero
    assert big.below_precision
    assert not R.from_int(3).below_precision
    assert valuation_of(big).is_inf


def test_laurent_normalization_pulls_pi_out():
    R = RamifiedRing(2, 1, 12)
    a = LaurentCoeff.from_int(R, 12)
    # the unit part must be 3, all pi powers in the exponent
    assert a.pi_exp == 2
    assert a.unit.digit_string() == "1,1"
    assert a.json_obj() == {"pi_exp": 2, "digits": "1,1"}


def test_laurent_arithmetic_and_inverse():
    R = RamifiedRing(2, 1, 12)
    a = LaurentCoeff.from_int(R, 12)
    b = LaurentCoeff.pi_power(R, -3)
    c = a * b
    assert c.pi_exp == -1
    assert c.valuation() == Val(-1)
    assert c * c.inverse() == LaurentCoeff.one(R)
    assert (a - a).is_zero
    assert (a + LaurentCoeff.zero(R)) == a


def test_laurent_mixed_exponent_addition():
    R = RamifiedRing(3, 1, 10)
    one = LaurentCoeff.one(R)
    three = LaurentCoeff.pi_power(R, 1)
    s = one + three  # 1 + pi = 4 at p = 3
    assert s.pi_exp == 0
    assert s == LaurentCoeff.from_int(R, 4)
