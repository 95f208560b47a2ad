"""Truncated multivariate series over exact Laurent coefficients."""

import pytest

from lubintate.series import SeriesMatrix, TruncSeries, row_times_matrix
from lubintate.valuations import LaurentCoeff, RamifiedRing


def ring():
    return RamifiedRing(2, 1, 10)


def test_variable_and_monomial_agree():
    R = ring()
    x = TruncSeries.variable(R, 2, 5, 1)
    m = TruncSeries.monomial(R, 2, 5, (1, 0), LaurentCoeff.one(R))
    assert x == m


def test_cap_kills_every_high_exponent():
    R = ring()
    x = TruncSeries.variable(R, 1, 4, 1)
    assert not (x * x * x).is_zero
    assert (x * x * x * x).is_zero  # exponent 4 = cap is dropped


def test_cap_is_per_variable():
    # x^3*y stays when each exponent is under the cap
    R = ring()
    x = TruncSeries.variable(R, 2, 4, 1)
    y = TruncSeries.variable(R, 2, 4, 2)
    prod = x * x * x * y
    assert not prod.is_zero
    assert prod.coeff((3, 1)) == LaurentCoeff.one(R)


def test_binomial_square_collects_cross_term():
    R = ring()
    x = TruncSeries.variable(R, 2, 5, 1)
    y = TruncSeries.variable(R, 2, 5, 2)
    s = (x + y) * (x + y)
    assert s.coeff((2, 0)) == LaurentCoeff.one(R)
    # 2xy: at p = 2 the coefficient is pi itself
    assert s.coeff((1, 1)) == LaurentCoeff.pi_power(R, 1)


def test_inverse_of_unit_series():
    R = ring()
    one = TruncSeries.one(R, 1, 6)
    x = TruncSeries.variable(R, 1, 6, 1)
    f = one + x
    g = f.inverse()
    assert f * g == one
    with pytest.raises(ValueError):
        x.inverse()  # constant term is zero


def test_frobenius_twist_raises_exponents():
    R = ring()
    x = TruncSeries.variable(R, 1, 9, 1)
    f = TruncSeries.one(R, 1, 9) + x
    tw = f.frobenius_twist(2)
    assert tw.coeff((2,)) == LaurentCoeff.one(R)
    assert tw.coeff((1,)).is_zero


def test_mul_pi_power_shifts_coefficients():
    R = ring()
    x = TruncSeries.variable(R, 1, 5, 1)
    shifted = x.mul_pi_power(-2)
    assert shifted.coeff((1,)) == LaurentCoeff.pi_power(R, -2)
    assert shifted.mul_pi_power(2) == x


def test_min_pi_exponent():
    R = ring()
    x = TruncSeries.variable(R, 1, 5, 1)
    f = x.mul_pi_power(-3) + TruncSeries.one(R, 1, 5)
    assert f.min_pi_exponent() == -3


def test_json_dict_terms_sorted():
    R = ring()
    x = TruncSeries.variable(R, 2, 4, 1)
    y = TruncSeries.variable(R, 2, 4, 2)
    d = (y + x + x * y).to_json_dict()
    exps = [t["exps"] for t in d["terms"]]
    assert exps == sorted(exps)
    assert d["cap"] == 4 and d["nvars"] == 2


def test_row_times_matrix_multiplies_like_linear_algebra():
    R = ring()
    one = TruncSeries.one(R, 1, 4)
    x = TruncSeries.variable(R, 1, 4, 1)
    zero = TruncSeries.zero(R, 1, 4)
    # row (1, x) times [[1, x], [0, 1]] = (1, x + x) = (1, 2x)
    M = SeriesMatrix(((one, x), (zero, one)))
    row = row_times_matrix((one, x), M)
    assert row[0] == one
    assert row[1] == x + x


def test_mixed_ring_rejected():
    R = ring()
    other = RamifiedRing(3, 1, 10)
    x = TruncSeries.variable(R, 1, 4, 1)
    z = TruncSeries.variable(other, 1, 4, 1)
    with pytest.raises(ValueError):
        _ = x + z
