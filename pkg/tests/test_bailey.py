import pytest

from qident import (
    IncompatibleRelA,
    LABELS,
    LEMMAS,
    UnknownLabel,
    apply_lemma,
    build_side,
    check_pair,
    expand,
    make_pair,
    six_psi_six,
)
from qident.bailey import SIX_PSI_SIX_ROWS, BaileyPair, gaussian
from qident.products import poch_finite
from qident.series import Monomial, series_sum


@pytest.mark.parametrize("label", LABELS)
def test_pairs_hold_small(label):
    r = check_pair(make_pair(label), 10, 50)
    assert r.passed, str(r)


def _beta_from_definition(p: BaileyPair, n: int, order):
    # beta_n = sum_r alpha_r / ((q;q)_(n-r) (aq;q)_(n+r)), straight from the definition
    q, aq = Monomial(1, 1), Monomial(1, p.rel + 1)
    parts = []
    for r in range(n + 1):
        den = poch_finite(q, q, n - r, order) * poch_finite(aq, q, n + r, order)
        parts.append(p.alpha(r, order) / den)
    return series_sum(parts, order)


@pytest.mark.parametrize("label", ["P1", "P3", "P7", "UNIT"])
def test_pair_against_definition(label):
    p = make_pair(label)
    for n in range(6):
        got = _beta_from_definition(p, n, 30)
        assert got.first_difference(p.beta(n, 30), 30) is None, n


def test_corrupted_pair_is_caught():
    p = make_pair("P2")

    def alpha(n, order):
        a = p.alpha(n, order)
        return a + expand("q^5", order) if n == 2 else a

    bad = BaileyPair("bad", p.rel, alpha, p.beta)
    r = check_pair(bad, 6, 40)
    assert not r.passed
    assert r.failure[0] == 2
    assert "fails at n=2" in str(r)


def test_gaussian_polynomial():
    assert str(gaussian(4, 2, 10)) == "1 + q + 2*q^2 + q^3 + q^4 (+O(q^10))"
    assert gaussian(3, 5, 10).is_zero()


def test_unknown_label():
    with pytest.raises(UnknownLabel):
        make_pair("P9")
    with pytest.raises(UnknownLabel):
        apply_lemma(make_pair("P1"), "XYZ", 10)


def test_rel_a_mismatch():
    with pytest.raises(IncompatibleRelA):
        make_pair("P1").relative_to(1)
    # the unit pair is generic and re-bases
    assert make_pair("UNIT").relative_to(1).rel == 1


@pytest.mark.parametrize("rel", [0, 1, 2])
def test_unit_pair_alpha_side_collapses(rel):
    # beta_n = delta_n0, so the whole alpha series must telescope to 1
    lhs, rhs = apply_lemma(make_pair("UNIT"), "aPBL", 80, rel=rel)
    assert str(lhs) == "1 (+O(q^80))"
    assert rhs.first_difference(lhs) is None


@pytest.mark.parametrize("lemma", LEMMAS)
def test_unit_pair_every_lemma(lemma):
    lhs, rhs = apply_lemma(make_pair("UNIT"), lemma, 80)
    assert lhs.first_difference(rhs) is None


def test_p2_apbl_is_the_first_mod18_identity():
    lhs, rhs = apply_lemma(make_pair("P2"), "aPBL", 120)
    assert lhs.first_difference(rhs) is None
    assert lhs.first_difference(build_side("m18-1", "lhs", 120)) is None
    assert rhs.first_difference(build_side("m18-1", "rhs", 120)) is None


@pytest.mark.parametrize("label, a, e", SIX_PSI_SIX_ROWS)
def test_six_psi_six_rows(label, a, e):
    for n in range(8):
        lhs, rhs = six_psi_six(a, e, n, 60)
        assert lhs.first_difference(rhs) is None, (label, n)
