from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qident import (
    BeyondOrder,
    Monomial,
    QSeries,
    ZeroLeadingTerm,
)
from qident.series import binomial_product, series_sum

ORDER = 24

coeffs = st.one_of(st.integers(-5, 5), st.fractions(min_value=-3, max_value=3, max_denominator=4))


@st.composite
def series(draw, order=ORDER, grid=(1, 2), unit=False):
    d = draw(st.sampled_from(grid))
    n = order * d
    cs = draw(st.dictionaries(st.integers(0, n - 1), coeffs, max_size=8))
    if unit:
        cs[0] = draw(st.sampled_from([1, -1, 2, Fraction(1, 3)]))
    return QSeries(cs, order, d)


def close(a: QSeries, b: QSeries, below=None):
    return a.first_difference(b, below) is None


@given(series(), series(), series())
def test_ring_laws(a, b, c):
    assert close(a + b, b + a)
    assert close(a * b, b * a)
    assert close((a + b) + c, a + (b + c))
    assert close((a * b) * c, a * (b * c))
    assert close(a * (b + c), a * b + a * c)
    assert close(a - a, QSeries.zero(ORDER))


@given(series(unit=True))
def test_inverse(a):
    one = QSeries.one(ORDER)
    assert close(a * a.inverse(), one)
    assert close(one / a, a.inverse())


@given(series(grid=(1,)), st.integers(1, 4))
def test_shifted_inverse_keeps_precision(a, v):
    s = (a + QSeries.one(ORDER)).shift(v)
    if s.valuation() != v:
        return
    inv = s.inverse()
    assert inv.valuation() == -v
    assert close(s * inv, QSeries.one(ORDER - v))


@settings(max_examples=50)
@given(series(order=12, grid=(1,)), series(order=12, grid=(1,)), st.integers(2, 3))
def test_substitution_is_a_ring_homomorphism(a, b, m):
    sa, sb = a.substitute_power(m), b.substitute_power(m)
    assert sa.order == 12 * m
    assert close((a * b).substitute_power(m), sa * sb)
    assert close((a + b).substitute_power(m), sa + sb)


@given(series(order=12, grid=(1,)), series(order=12, grid=(1,)))
def test_negate_q_is_a_ring_homomorphism(a, b):
    assert close((a * b).negate_q(), a.negate_q() * b.negate_q())
    assert close(a.negate_q().negate_q(), a)


def test_negate_root_flips_half_integer_exponents():
    s = QSeries.from_terms({0: 1, Fraction(1, 2): 3, 1: 5}, 4)
    t = s.negate_root()
    assert t.coefficient(Fraction(1, 2)) == -3
    assert t.coefficient(1) == 5


@given(series(), st.integers(1, ORDER))
def test_truncate_then_compare(a, k):
    t = a.truncate(k)
    assert t.order == k
    assert close(a, t, k)


@given(series())
def test_json_round_trip(a):
    assert QSeries.from_json(a.to_json()) == a


def test_monotone_first_difference():
    a = QSeries.from_list([1, 1, 2, 3, 5, 8], 6)
    b = QSeries.from_list([1, 1, 2, 4, 5, 9], 6)
    assert a.first_difference(b) == (3, 3, 4)
    assert a.first_difference(b, 3) is None


def test_coefficient_beyond_order():
    with pytest.raises(BeyondOrder):
        QSeries.one(5).coefficient(5)


def test_inverse_of_zero():
    with pytest.raises(ZeroLeadingTerm):
        QSeries.zero(5).inverse()


def test_substitute_rational_power():
    s = QSeries.from_terms({Fraction(1, 2): 1, 2: -1}, 3)
    t = s.substitute_power(Fraction(1, 3))
    assert t.order == 1
    assert t.coefficient(Fraction(1, 6)) == 1
    assert t.coefficient(Fraction(2, 3)) == -1
    with pytest.raises(ValueError):
        s.substitute_power(0)


def test_binomial_product_is_euler():
    # (q;q)_inf to order 8 via one factor at a time
    s = QSeries.one(8)
    for e in range(1, 8):
        s = s.mul_binomial(1, e)
    assert str(s) == "1 - q - q^2 + q^5 + q^7 (+O(q^8))"
    inv = QSeries.one(8)
    for e in range(1, 8):
        inv = inv.div_binomial(1, e)
    assert close(s * inv, QSeries.one(8))


def test_binomial_product_helper_matches_repeated_multiplication():
    # 3 q^2 (1 - q^2)(1 - q^5) / (1 + q^3)
    got = binomial_product(3, 2, [(1, 2), (1, 5)], [(-1, 3)], 20)
    want = QSeries.monomial(3, 2, 20).mul_binomial(1, 2).mul_binomial(1, 5).div_binomial(-1, 3)
    assert close(got, want)
    assert got.valuation() == 2


def test_series_sum_uses_common_order():
    parts = [QSeries.monomial(1, k, 10) for k in range(12)]
    s = series_sum(parts, 10)
    assert s.order == 10
    assert len(s) == 10


def test_monomial_arithmetic():
    m = Monomial(-1, Fraction(3, 2))
    assert (m * m) == Monomial(1, 3)
    assert (m ** -1) == Monomial(-1, Fraction(-3, 2))
    assert str(Monomial.q(2)) == "q^2"
