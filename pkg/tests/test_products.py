from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from qident import (
    DivergentBase,
    DomainViolation,
    FactorProduct,
    Monomial,
    QSeries,
    expand,
    f_neg,
    false_theta,
    jacobi_triple_product,
    phi,
    poch_finite,
    poch_infinite,
    psi,
    quintuple_product,
    theta_f,
)
from qident.products import poch_multi

q = Monomial(1, 1)


def partitions(n, largest=None, gap=0):
    """All partitions of n into parts <= largest whose consecutive parts differ by >= gap."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in partitions(n - part, part - gap, gap):
            yield (part,) + rest


def test_partition_oracle():
    euler_inv = poch_infinite(q, q, 40).inverse()
    for n in range(40):
        assert euler_inv.coefficient(n) == sum(1 for _ in partitions(n)), n


def test_euler_pentagonal():
    s = poch_infinite(q, q, 60)
    want = {}
    for k in range(-7, 8):
        want[k * (3 * k - 1) // 2] = (-1) ** k
    for n in range(60):
        assert s.coefficient(n) == want.get(n, 0)


def test_finite_poch_matches_product():
    s = poch_finite(Monomial(-1, 2), Monomial(1, 3), 4, 30)
    want = QSeries.one(30)
    for j in range(4):
        want = want.mul_binomial(-1, 2 + 3 * j)
    assert s.first_difference(want) is None


def test_poch_multi_is_product_of_factors():
    bases = [Monomial(1, 1), Monomial(-1, 2)]
    got = poch_multi(bases, Monomial(1, 3), None, 40)
    want = poch_infinite(bases[0], Monomial(1, 3), 40) * poch_infinite(bases[1], Monomial(1, 3), 40)
    assert got.first_difference(want) is None


def test_poch_infinite_domain():
    with pytest.raises(DivergentBase):
        poch_infinite(Monomial(1, 0), q, 10)
    with pytest.raises(DomainViolation):
        poch_infinite(Monomial(1, -1), q, 10)


def test_psi_triangular():
    assert str(psi(q, 11)) == "1 + q + q^3 + q^6 + q^10 (+O(q^11))"


def test_phi_squares():
    s = phi(q, 30)
    for n in range(30):
        root = int(n ** 0.5)
        assert s.coefficient(n) == (2 if root * root == n and n else 1 if n == 0 else 0)


def test_f_neg_is_euler_product():
    assert f_neg(q, 50).first_difference(poch_infinite(q, q, 50)) is None


def test_theta_f_symmetric_and_special_values():
    a, b = Monomial(1, 2), Monomial(-1, 3)
    assert theta_f(a, b, 40).first_difference(theta_f(b, a, 40)) is None
    assert theta_f(q, q, 30).first_difference(phi(q, 30)) is None
    assert theta_f(q, Monomial(1, 3), 30).first_difference(psi(q, 30)) is None
    assert theta_f(Monomial(-1, 0), q, 20).is_zero()


exps = st.fractions(min_value=0, max_value=12).map(lambda x: Fraction(round(x * 2), 2))
signs = st.sampled_from([1, -1])


@settings(max_examples=40, deadline=None)
@given(signs, exps, signs, exps)
def test_jacobi_triple_product(ca, ea, cb, eb):
    if ea + eb == 0:
        return
    a, b = Monomial(ca, ea), Monomial(cb, eb)
    assert theta_f(a, b, 60).first_difference(jacobi_triple_product(a, b, 60)) is None


def test_triple_product_needs_convergent_base():
    with pytest.raises(DomainViolation):
        jacobi_triple_product(Monomial(1, 0), Monomial(1, 0), 10)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 30), st.integers(1, 10), signs)
def test_quintuple_product_forms_agree(w2, x2, sx):
    w, x = Monomial(1, Fraction(w2, 2)), Monomial(sx, Fraction(x2, 2))
    if 3 * x.exp > w.exp:
        return
    s, quo, prod = quintuple_product(w, x, 60)
    assert s.first_difference(quo) is None
    assert s.first_difference(prod) is None


def test_quintuple_product_instances():
    for w, x in ((Monomial(1, Fraction(27, 2)), Monomial(1, Fraction(3, 2))), (Monomial(1, 9), Monomial(-1, 1))):
        s, quo, prod = quintuple_product(w, x, 100)
        assert s.first_difference(quo) is None and s.first_difference(prod) is None
    # the second instance is the theta difference f(q^12,q^15) - q f(q^6,q^21)
    s, _, _ = quintuple_product(Monomial(1, 9), Monomial(-1, 1), 100)
    want = theta_f(Monomial(1, 12), Monomial(1, 15), 100) - theta_f(Monomial(1, 6), Monomial(1, 21), 101).shift(1)
    assert s.first_difference(want, 100) is None


def test_false_theta_telescopes():
    assert str(false_theta(q, q, 50)) == "1 (+O(q^50))"


def test_false_theta_matches_one_sided_sums():
    o = 200
    cases = [
        ("sum(n>=0, (-1)^n * q^(18*n^2+3*n) * (1 + q^(30*n+15)))", Monomial(-1, 21), Monomial(-1, 15)),
        ("sum(n>=0, q^(18*n^2+3*n) * (1 - q^(30*n+15)))", Monomial(1, 21), Monomial(1, 15)),
        ("2 * sum(n>=0, (-1)^n * q^(18*n^2+18*n))", Monomial(-1, 36), Monomial(-1, 0)),
    ]
    for text, a, b in cases:
        assert expand(text, o).first_difference(false_theta(a, b, o)) is None, text


def test_factor_product_zero_weights_cancel():
    # (1 - q^0 * 1) appears once upstairs and once downstairs with equal weight
    fp = FactorProduct(1, 0)
    fp.binomial(1, 0, 1, weight=3).binomial(1, 0, -1, weight=3).binomial(1, 2)
    assert fp.build(10).first_difference(QSeries.one(10).mul_binomial(1, 2)) is None


def test_quad_factor():
    fp = FactorProduct().quad(1, 2)  # 1 - q^2 + q^4
    assert str(fp.build(10)) == "1 - q^2 + q^4 (+O(q^10))"
