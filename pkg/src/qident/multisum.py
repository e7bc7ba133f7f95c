"""Nested multisums of Andrews-Gordon type and their product sides.

Every family is indexed by ``n_1, ..., n_k >= 0`` with ``N_j = n_j + ... + n_k``.
The product sides are triple products (``ag_product``, ``bressoud_product``)
or quintuple products (``a22_product``) over ``(q;q)_inf``.

>>> multisum(MultisumSpec("5.2", 1, 2), 12) == ag_product(1, 2, 12)
True
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from .errors import IndexOutOfRange, UnknownLabel
from .products import FactorProduct
from .series import Monomial, QSeries, as_fraction, series_sum

FAMILIES = ("5.2", "5.3", "5.5", "5.6", "5.7", "5.8", "5.9", "5.10")

# descriptive aliases; the a22 names carry the modulus of the product side
ALIASES = {
    "andrews-gordon": "5.2",
    "bressoud": "5.3",
    "a22-6k-1": "5.5",
    "a22-6k": "5.6",
    "a22-6k+1": "5.7",
    "a22-6k+2": "5.8",
    "a22-6k+3": "5.9",
    "a22-6k+4": "5.10",
}


def legendre3(n: int) -> int:
    """The Legendre symbol (n/3)."""
    return (0, 1, -1)[n % 3]


def family_tag(name: str) -> str:
    tag = ALIASES.get(name, name)
    if tag not in FAMILIES:
        raise UnknownLabel(f"unknown multisum family {name!r}; known: {', '.join(FAMILIES + tuple(ALIASES))}")
    return tag


@dataclass(frozen=True)
class MultisumSpec:
    """A member of one of the multisum families.

    ``i`` is only used by the triple-product families 5.2 and 5.3.
    ``extra_in_N`` selects, for family 5.6, whether the ``(k+1)``-st index
    also enters the partial sums ``N_j``.
    """

    family: str
    k: int
    i: Optional[int] = None
    extra_in_N: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", family_tag(self.family))
        if self.k < 1:
            raise IndexOutOfRange(f"depth k must be >= 1, got {self.k}")
        if self.family in ("5.2", "5.3"):
            if self.i is None or not 1 <= self.i <= self.k + 1:
                raise IndexOutOfRange(f"family {self.family} needs 1 <= i <= k+1, got i={self.i}")

    @property
    def depth(self) -> int:
        return self.k + 1 if self.family == "5.6" else self.k


def _partials(ns: Sequence[int]) -> List[int]:
    out, acc = [], 0
    for n in reversed(ns):
        acc += n
        out.append(acc)
    return out[::-1]


def _exponent(spec: MultisumSpec, ns: Sequence[int]) -> Fraction:
    k, f = spec.k, spec.family
    if f == "5.6":
        N = _partials(ns if spec.extra_in_N else ns[:k])
        return Fraction(sum(x * x for x in N[:k]))
    N = _partials(ns)
    if f in ("5.2", "5.3"):
        return Fraction(sum(x * x for x in N) + sum(N[spec.i - 1:]))
    if f in ("5.5", "5.7"):
        e = Fraction(N[0] * (N[0] + 1), 2) + sum(x * (x + 1) for x in N[1:])
        if f == "5.5":
            e += N[-1] ** 2
        return e
    if f == "5.8":
        return Fraction(sum(x * x for x in N[:-1]) + 2 * N[-1] ** 2)
    return Fraction(sum(x * x for x in N))  # 5.9, 5.10


def _term(spec: MultisumSpec, ns: Sequence[int]) -> FactorProduct:
    k, f = spec.k, spec.family
    q1 = Monomial(1, 1)
    fp = FactorProduct(1, _exponent(spec, ns))
    last = k - 1
    for j in range(k - 1):
        fp.poch(q1, 1, ns[j], -1)
    if f == "5.2":
        fp.poch(q1, 1, ns[last], -1)
    elif f == "5.3":
        fp.poch(Monomial(1, 2), 2, ns[last], -1)
    elif f in ("5.5", "5.7"):
        fp.poch(q1, 1, 2 * ns[last] + 1, -1)
        fp.poch(Monomial(-1, sum(ns) + 1), 1, None, -1)
    elif f == "5.6":
        # no (q;q)_{n_k} here: with it the sum misses the product already at k = 1
        fp.scalar(legendre3(ns[k - 1] - ns[k] + 1))
        fp.poch(q1, 1, ns[k], -1)
        fp.poch(q1, 1, 2 * ns[k - 1] - ns[k], -1)
    elif f in ("5.8", "5.10"):
        fp.poch(q1, 1, 2 * ns[last], -1)
    elif f == "5.9":
        fp.poch(q1, 1, 2 * ns[last], -1)
        fp.poch(Monomial(-1, 0), 3, ns[last]).poch(Monomial(-1, 0), 1, ns[last], -1)
    return fp


def multisum(spec: MultisumSpec, order) -> QSeries:
    """Expand the sum side of ``spec`` below ``order``."""
    order = as_fraction(order)
    depth = spec.depth
    terms: List[QSeries] = []

    def walk(prefix: List[int]):
        pos = len(prefix)
        if pos == depth:
            fp = _term(spec, prefix)
            if not fp.is_zero() and fp.exp < order:
                terms.append(fp.build(order))
            return
        n = 0
        while True:
            trial = prefix + [n] + [0] * (depth - pos - 1)
            if spec.family == "5.6" and pos == depth - 1:
                # the extra index is capped by the length 2 n_k - n_{k+1} >= 0
                if n > 2 * prefix[spec.k - 1]:
                    break
            elif _exponent(spec, trial) >= order:
                break
            walk(prefix + [n])
            n += 1

    walk([])
    return series_sum(terms, order)


def _quintuple_over_euler(a: int, M: int, order) -> QSeries:
    fp = FactorProduct()
    for b in (a, M - a, M):
        fp.poch(Monomial(1, b), M, None)
    for b in (M - 2 * a, M + 2 * a):
        fp.poch(Monomial(1, b), 2 * M, None)
    fp.poch(Monomial(1, 1), 1, None, -1)
    return fp.build(order)


def _triple_over_euler(i: int, M: int, order) -> QSeries:
    fp = FactorProduct()
    for b in (i, M - i, M):
        fp.poch(Monomial(1, b), M, None)
    fp.poch(Monomial(1, 1), 1, None, -1)
    return fp.build(order)


def ag_product(k: int, i: int, order) -> QSeries:
    """``(q^i, q^(2k+3-i), q^(2k+3); q^(2k+3))_inf / (q;q)_inf``."""
    if k < 1 or not 1 <= i <= k + 1:
        raise IndexOutOfRange(f"need k >= 1 and 1 <= i <= k+1, got k={k}, i={i}")
    return _triple_over_euler(i, 2 * k + 3, order)


def bressoud_product(k: int, i: int, order) -> QSeries:
    """``(q^i, q^(2k+2-i), q^(2k+2); q^(2k+2))_inf / (q;q)_inf``."""
    if k < 1 or not 1 <= i <= k + 1:
        raise IndexOutOfRange(f"need k >= 1 and 1 <= i <= k+1, got k={k}, i={i}")
    return _triple_over_euler(i, 2 * k + 2, order)


def a22_product(level: int, i: int, order) -> QSeries:
    """Quintuple product of level ``level`` over ``(q;q)_inf``.

    ``(q^i, q^(l+3-i), q^(l+3); q^(l+3))_inf (q^(l+3-2i), q^(l+2i+3); q^(2l+6))_inf / (q;q)_inf``
    for ``1 <= i <= 1 + floor(l/2)``.
    """
    if level < 1 or not 1 <= i <= 1 + level // 2:
        raise IndexOutOfRange(f"need 1 <= i <= 1 + floor({level}/2), got i={i}")
    return _quintuple_over_euler(i, level + 3, order)


# family -> (level, i) of the product side as functions of k
_PRODUCT_SIDE: dict = {
    # first base q^(2k-1), not q^k: the two agree only at k = 1
    "5.5": lambda k: (6 * k - 4, 2 * k - 1),
    "5.6": lambda k: (6 * k - 3, k),
    "5.7": lambda k: (6 * k - 2, 2 * k),
    "5.8": lambda k: (6 * k - 1, k),
    "5.9": lambda k: (6 * k, k + 1),
    "5.10": lambda k: (6 * k + 1, k + 1),
}


def product_side(spec: MultisumSpec, order) -> QSeries:
    """The displayed product side matching ``spec``."""
    if spec.family == "5.2":
        return ag_product(spec.k, spec.i, order)
    if spec.family == "5.3":
        return bressoud_product(spec.k, spec.i, order)
    level, i = _PRODUCT_SIDE[spec.family](spec.k)
    return a22_product(level, i, order)
