"""Bailey pairs, the four lemma specialisations used here, and the 6psi6 sum.

A pair ``(alpha_n, beta_n)`` relative to ``a`` satisfies

    beta_n = sum_{r=0}^{n} alpha_r / ((q;q)_{n-r} (aq;q)_{n+r}).

Only ``a = q^k`` with integer ``k >= 0`` occurs, so after multiplying by
``(aq;q)_{2n}`` each denominator becomes the Gaussian polynomial
``[2n+k, n-r]``; :func:`check_pair` compares that polynomial form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import Callable, Dict, Optional, Tuple

from .errors import IncompatibleRelA, NonTerminating, UnknownLabel
from .expr import expand, parse
from .products import FactorProduct, phi
from .series import Monomial, QSeries, as_fraction, binomial_product, series_sum

LEMMAS = ("aPBL", "aTBL", "S2BL", "FBL")

# alpha templates by residue of the index mod 3: keys 0 (n=3r), 1 (n=3r+1), -1 (n=3r-1)
_B1 = "(-1;q^3)_n / ((q;q)_(2*n) * (-1;q)_n)"
_B4 = "(-q^(3/2);q^3)_n / ((q^2;q)_(2*n) * (-q^(1/2);q)_n)"
_BJ = "(q^(3/2);q^3)_n / ((q^2;q)_(2*n) * (q^(1/2);q)_n)"

_TABLE: Dict[str, Tuple[int, str, Dict[int, str]]] = {
    "P1": (0, _B1, {
        0: "q^(9/2*r^2-3/2*r) * (1 + q^(3*r))",
        -1: "-q^(9/2*r^2-9/2*r+1)",
        1: "-q^(9/2*r^2+9/2*r+1)",
    }),
    "P2": (0, "q^n * " + _B1, {
        0: "q^(9/2*r^2-3/2*r) * (1 + q^(3*r))",
        -1: "-q^(9/2*r^2-3/2*r)",
        1: "-q^(9/2*r^2+3/2*r)",
    }),
    "P3": (1, "(-q^3;q^3)_n / ((q^2;q)_(2*n) * (-q;q)_n)", {
        0: "q^(9/2*r^2+3/2*r)",
        -1: "q^(9/2*r^2-3/2*r)",
        1: "-2*q^(9/2*r^2+9/2*r+1)",
    }),
    "P4": (1, _B4, {
        0: "q^(9/2*r^2)",
        -1: "q^(9/2*r^2)",
        1: "-q^(9/2*r^2+3*r+1/2) * (1 + q^(3*r+3/2))",
    }),
    "P5": (1, "q^n * " + _B4, {
        0: "q^(9/2*r^2+3*r)",
        -1: "q^(9/2*r^2-3*r)",
        1: "-q^(9/2*r^2) * (q^(6*r+3/2) + q^(3*r))",
    }),
    "P6": (1, "(1 - q) * " + _B1, {
        0: "q^(9/2*r^2-3/2*r) * (1 - q^(6*r+1))",
        -1: "-q^(9/2*r^2-9/2*r+1) * (1 - q^(6*r-1))",
        1: "0",
    }),
    "P7": (1, "(q^3;q^3)_(n-1) / ((q^2;q)_(2*n-1) * (q;q)_(n-1))", {
        0: "(-1)^r * q^(9/2*r^2-3/2*r) * (1 - q^(6*r+1)) / (1 - q)",
        -1: "(-1)^(r+1) * q^(9/2*r^2-9/2*r+1) * (1 - q^(6*r-1)) / (1 - q)",
        1: "(-1)^(r+1) * q^(9/2*r^2+3/2*r+1) * (1 - q^(6*r+3)) / (1 - q)",
    }),
    # P4 and P5 with q^(1/2) -> -q^(1/2); a = q is unchanged by that map
    "J4": (1, _BJ, {
        0: "(-1)^r * q^(9/2*r^2)",
        -1: "(-1)^r * q^(9/2*r^2)",
        1: "(-1)^r * q^(9/2*r^2+3*r+1/2) * (1 - q^(3*r+3/2))",
    }),
    "J5": (1, "q^n * " + _BJ, {
        0: "(-1)^r * q^(9/2*r^2+3*r)",
        -1: "(-1)^r * q^(9/2*r^2-3*r)",
        1: "(-1)^r * q^(9/2*r^2) * (q^(6*r+3/2) - q^(3*r))",
    }),
}

LABELS = tuple(_TABLE) + ("UNIT", "BRESSOUD")

# pairs whose index-0 terms come from the closed forms (both equal 1 - q for P6)
# rather than the usual alpha_0 = beta_0 = 1
_ZERO_FROM_FORMULA = {"P6"}


@dataclass(frozen=True)
class BaileyPair:
    """A Bailey pair relative to ``a = q^rel`` in base ``q``.

    ``alpha(n, order)`` and ``beta(n, order)`` return truncated series.
    ``generic`` pairs (the unit pair) exist for every ``a`` and can be
    re-based with :meth:`relative_to`.
    """

    label: str
    rel: int
    alpha: Callable[[int, Fraction], QSeries] = field(repr=False, compare=False)
    beta: Callable[[int, Fraction], QSeries] = field(repr=False, compare=False)
    generic: bool = False

    @property
    def rel_a(self) -> Monomial:
        return Monomial(1, self.rel)

    def relative_to(self, rel: int) -> "BaileyPair":
        if rel == self.rel:
            return self
        if not self.generic:
            raise IncompatibleRelA(f"{self.label} is a pair relative to q^{self.rel}, not q^{rel}")
        return _unit_pair(rel)


@lru_cache(maxsize=None)
def _template(text: str):
    return parse(text)


def _table_alpha(label: str, templates: Dict[int, str]):
    def alpha(n: int, order) -> QSeries:
        order = as_fraction(order)
        if n == 0 and label not in _ZERO_FROM_FORMULA:
            return QSeries.one(order)
        residue = (n + 1) % 3 - 1
        r = (n - residue) // 3
        return expand(_template(templates[residue]), order, {"r": r})

    return alpha


def _table_beta(label: str, text: str):
    def beta(n: int, order) -> QSeries:
        order = as_fraction(order)
        if n == 0 and label not in _ZERO_FROM_FORMULA:
            return QSeries.one(order)
        return expand(_template(text), order, {"n": n})

    return beta


def _unit_pair(rel: int) -> BaileyPair:
    # alpha_n = (1 - a q^(2n)) (a;q)_n (-1)^n q^(n(n-1)/2) / ((1 - a)(q;q)_n), a = q^rel
    def alpha(n: int, order) -> QSeries:
        order = as_fraction(order)
        if n == 0:
            return QSeries.one(order)
        fp = FactorProduct((-1) ** n, Fraction(n * (n - 1), 2))
        if rel == 0:
            fp.binomial(-1, n)
        else:
            fp.binomial(1, rel + 2 * n).binomial(1, rel, -1)
            fp.poch(Monomial(1, rel), 1, n).poch(Monomial(1, 1), 1, n, -1)
        return fp.build(order)

    def beta(n: int, order) -> QSeries:
        return QSeries.one(order) if n == 0 else QSeries.zero(order)

    return BaileyPair("UNIT", rel, alpha, beta, generic=True)


def _bressoud_pair() -> BaileyPair:
    def alpha(n: int, order) -> QSeries:
        order = as_fraction(order)
        if n == 0:
            return QSeries.one(order)
        return QSeries.monomial(2 * (-1) ** n, n * n, order)

    def beta(n: int, order) -> QSeries:
        return FactorProduct().poch(Monomial(1, 2), 2, n, -1).build(order)

    return BaileyPair("BRESSOUD", 0, alpha, beta)


def make_pair(label: str) -> BaileyPair:
    """Pair by label: ``P1``..``P7``, ``J4``, ``J5``, ``UNIT`` or ``BRESSOUD``."""
    if label == "UNIT":
        return _unit_pair(0)
    if label == "BRESSOUD":
        return _bressoud_pair()
    if label not in _TABLE:
        raise UnknownLabel(f"unknown Bailey pair {label!r}; known: {', '.join(LABELS)}")
    rel, beta, alphas = _TABLE[label]
    return BaileyPair(label, rel, _table_alpha(label, alphas), _table_beta(label, beta))


# ---------------------------------------------------------------------------
# the defining relation


@dataclass(frozen=True)
class PairReport:
    label: str
    n_max: int
    order: Fraction
    passed: bool
    failure: Optional[Tuple[int, Fraction]] = None  # (n, first differing exponent)

    def __str__(self):
        if self.passed:
            return f"{self.label}: relation holds for n <= {self.n_max} below q^{self.order}"
        n, e = self.failure
        return f"{self.label}: relation fails at n={n}, first at q^{e}"


def gaussian(N: int, m: int, order) -> QSeries:
    """Gaussian polynomial ``[N, m]`` truncated at ``order``."""
    order = as_fraction(order)
    if m < 0 or m > N:
        return QSeries.zero(order)
    num = [(Fraction(1), Fraction(N - m + j)) for j in range(1, m + 1)]
    den = [(Fraction(1), Fraction(j)) for j in range(1, m + 1)]
    return binomial_product(1, 0, num, den, order)


def check_pair(p: BaileyPair, n_max: int, order) -> PairReport:
    """Compare ``beta_n (aq;q)_{2n}`` with ``sum_r alpha_r [2n+k, n-r]`` for ``n <= n_max``."""
    order = as_fraction(order)
    k = p.rel
    alphas = [p.alpha(r, order) for r in range(n_max + 1)]
    for n in range(n_max + 1):
        lhs = p.beta(n, order)
        for j in range(1, 2 * n + 1):
            lhs = lhs.mul_binomial(1, k + j)
        terms = [
            alphas[r] * gaussian(2 * n + k, n - r, order)
            for r in range(n + 1)
            if not alphas[r].is_zero() and alphas[r].valuation() < order
        ]
        rhs = series_sum(terms, order)
        diff = lhs.first_difference(rhs, order)
        if diff is not None:
            return PairReport(p.label, n_max, order, False, (n, diff[0]))
    return PairReport(p.label, n_max, order, True)


# ---------------------------------------------------------------------------
# lemma specialisations


def _rebased(p: BaileyPair, m: int):
    """Pair sequences with q -> q^m (m in {1, 2})."""
    if m == 1:
        return p.alpha, p.beta

    def sub(f):
        return lambda n, order: f(n, Fraction(ceil(as_fraction(order) / m))).substitute_power(m).truncate(order)

    return sub(p.alpha), sub(p.beta)


def _lemma_sum(seq, weight: Callable[[int], FactorProduct], order: Fraction) -> QSeries:
    terms = []
    history = []
    n = 0
    while True:
        fp = weight(n)
        v = fp.exp
        if v < order:
            terms.append(fp.build(order) * seq(n, order - v))
        history.append(v)
        if len(history) >= 3 and v >= order and v - history[-2] >= history[-2] - history[-3] >= 0:
            break
        n += 1
        if n > 100_000:
            raise NonTerminating("lemma sum did not settle")
    return series_sum(terms, order)


def apply_lemma(p: BaileyPair, lemma: str, order, rel: Optional[int] = None) -> Tuple[QSeries, QSeries]:
    """Return (beta side, alpha side) of a lemma instance.

    ``aPBL``:  sum a^n q^(n^2) beta_n = (aq;q)_inf^-1 sum a^r q^(r^2) alpha_r
    ``aTBL``:  the same weights with (-q;q^2)_n, pair taken in base q^2;
               alpha side carries (-aq;q^2)_inf / (aq^2;q^2)_inf
    ``S2BL``:  (1-q^2)^-1 sum q^(n(n+1)) (-q^2;q^2)_n beta_n(q^2,q^2)
               = phi(-q^2)^-1 sum q^(r(r+1)) alpha_r(q^2,q^2)
    ``FBL``:   (1-q^2)^-1 sum (-1)^n q^(n(n+1)) (q^2;q^2)_n beta_n(q^2,q^2)
               = sum (-1)^r q^(r(r+1)) alpha_r(q^2,q^2)

    ``S2BL`` and ``FBL`` need a pair relative to ``q``; generic pairs are
    re-based automatically.
    """
    order = as_fraction(order)
    if lemma not in LEMMAS:
        raise UnknownLabel(f"unknown lemma {lemma!r}; known: {', '.join(LEMMAS)}")
    if order <= 0:
        return QSeries.zero(order), QSeries.zero(order)
    if lemma in ("S2BL", "FBL"):
        p = p.relative_to(1)
    elif rel is not None:
        p = p.relative_to(rel)
    m = 1 if lemma == "aPBL" else 2
    alpha, beta = _rebased(p, m)
    ka = p.rel * m  # a = q^ka in base q

    if lemma in ("aPBL", "aTBL"):
        def w(n):
            fp = FactorProduct(1, ka * n + n * n)
            if lemma == "aTBL":
                fp.poch(Monomial(-1, 1), 2, n)
            return fp

        lhs = _lemma_sum(beta, w, order)
        rhs = _lemma_sum(alpha, lambda r: FactorProduct(1, ka * r + r * r), order)
        pre = FactorProduct()
        if lemma == "aPBL":
            pre.poch(Monomial(1, ka + 1), 1, None, -1)
        else:
            pre.poch(Monomial(-1, ka + 1), 2, None).poch(Monomial(1, ka + 2), 2, None, -1)
        return lhs, pre.build(order) * rhs

    sign = -1 if lemma == "FBL" else 1

    def w(n):
        fp = FactorProduct(sign**n, n * (n + 1))
        fp.poch(Monomial(-sign, 2), 2, n)
        return fp

    lhs = _lemma_sum(beta, w, order).div_binomial(1, 2)
    rhs = _lemma_sum(alpha, lambda r: FactorProduct(sign**r, r * (r + 1)), order)
    if lemma == "S2BL":
        rhs = rhs / phi(Monomial(-1, 2), order)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Bailey's 6psi6 with q -> q^3 in some places


def six_psi_six(a: Monomial, e: Monomial, n: int, order) -> Tuple[QSeries, QSeries]:
    """Both sides of the terminating bilateral summation used for the pairs.

    LHS  sum_r (1 - a q^(6r)) (q^-n;q)_(3r) (e;q^3)_r a^(2r) q^(3nr)
               / ((1 - a) (a q^(n+1);q)_(3r) (a q^3/e;q^3)_r e^r)
    RHS  (a, q^3/a, a q^2/e, a q/e; q^3)_inf (q, aq;q)_n (a^2/e;q^3)_n
         / ((q, q^2, q^3/e, a^2/e; q^3)_inf (a;q)_(2n) (aq/e;q)_n)

    Factors that vanish because ``e`` sits on a removable singularity carry
    a weight so that 0/0 resolves to the limit as ``e`` moves.
    """
    order = as_fraction(order)
    if a.coeff != 1 or a.exp.denominator != 1 or a.exp <= 0:
        raise NonTerminating(f"a = {a} is not a positive integral power of q; the sum does not terminate below")
    k = int(a.exp)
    inv_e = Monomial(1, 0) / e
    W = 1  # weight of factors proportional to 1/e

    def m(c, x):
        return Monomial(c, x)

    terms = []
    lo = -((k + n + 1 + 2) // 3) - 1
    for r in range(lo, n // 3 + 1):
        fp = FactorProduct()
        fp.binomial(a.coeff, a.exp + 6 * r).binomial(a.coeff, a.exp, -1)
        fp.poch(m(1, -n), 1, 3 * r)
        fp.poch(e, 3, r, 1, -W)
        fp.monomial(a, 2 * r).monomial(m(1, 3 * n * r), 1).monomial(e, -r)
        fp.poch(a * m(1, n + 1), 1, 3 * r, -1)
        fp.poch(a * m(1, 3) * inv_e, 3, r, -1, W)
        if not fp.is_zero():
            terms.append(fp.build(order))
    lhs = series_sum(terms, order)

    fp = FactorProduct()
    fp.poch(a, 3, None)
    fp.poch(m(1, 3) / a, 3, None)
    fp.poch(a * m(1, 2) * inv_e, 3, None, 1, W)
    fp.poch(a * m(1, 1) * inv_e, 3, None, 1, W)
    fp.poch(m(1, 1), 1, n).poch(a * m(1, 1), 1, n)
    fp.poch(a * a * inv_e, 3, n, 1, W)
    fp.poch(m(1, 1), 3, None, -1).poch(m(1, 2), 3, None, -1)
    fp.poch(m(1, 3) * inv_e, 3, None, -1, W)
    fp.poch(a * a * inv_e, 3, None, -1, W)
    fp.poch(a, 1, 2 * n, -1)
    fp.poch(a * m(1, 1) * inv_e, 1, n, -1, W)
    return lhs, fp.build(order)


# rows (label, a, e) used to derive the table pairs
SIX_PSI_SIX_ROWS = (
    ("P1/P2/P6", Monomial(1, 1), Monomial(-1, 2)),
    ("P3", Monomial(1, 2), Monomial(-1, 1)),
    ("P4/P5", Monomial(1, 2), Monomial(-1, Fraction(5, 2))),
    ("P7", Monomial(1, 1), Monomial(1, 2)),
)
