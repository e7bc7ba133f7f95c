"""Exact truncated formal series in q^(1/d).

A :class:`QSeries` stores a sparse map from exponent numerators ``k`` (the
exponent is ``k/d``) to exact rational coefficients, together with a
truncation order ``O``: every coefficient with exponent ``< O`` is exact,
nothing is known at or above ``O``.  Orders propagate pessimistically through
arithmetic, so a result never claims more precision than its inputs justify.

Coefficients are kept as :class:`int` whenever they are integral and as
:class:`fractions.Fraction` otherwise; the two mix freely under Python's
numeric tower and integer arithmetic keeps the common case fast.

>>> one_minus_q = QSeries.from_terms({0: 1, 1: -1}, order=5)
>>> print(one_minus_q.inverse())
1 + q + q^2 + q^3 + q^4 (+O(q^5))
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Tuple, Union

from .errors import BeyondOrder, FractionalGrid, ZeroLeadingTerm

Coeff = Union[int, Fraction]
Rational = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and strings such as ``"3/2"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction")
    return Fraction(x)


def norm_coeff(c) -> Coeff:
    """Canonical coefficient: integral values become ``int``."""
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    return norm_coeff(as_fraction(c))


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _limit(order: Fraction, d: int) -> int:
    """Exclusive bound on exponent numerators: k/d < order  <=>  k < limit."""
    return math.ceil(order * d)


def _fmt_exp(e: Fraction) -> str:
    if e.denominator == 1:
        return f"q^{e.numerator}" if e != 1 else "q"
    return f"q^({e.numerator}/{e.denominator})"


def _fmt_coeff(c) -> str:
    c = norm_coeff(c)
    return str(c)


@dataclass(frozen=True)
class Monomial:
    """Signed power ``coeff * q^exp`` used as theta arguments and Pochhammer bases."""

    coeff: Fraction
    exp: Fraction

    def __init__(self, coeff: Rational = 1, exp: Rational = 0):
        coeff = as_fraction(coeff)
        if coeff == 0:
            raise ValueError("monomial coefficient must be nonzero")
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "exp", as_fraction(exp))

    @classmethod
    def q(cls, exp: Rational = 1, coeff: Rational = 1) -> "Monomial":
        return cls(coeff, exp)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not isinstance(other, Monomial):
            return Monomial(self.coeff * as_fraction(other), self.exp)
        return Monomial(self.coeff * other.coeff, self.exp + other.exp)

    __rmul__ = __mul__

    def __truediv__(self, other: "Monomial") -> "Monomial":
        if not isinstance(other, Monomial):
            return Monomial(self.coeff / as_fraction(other), self.exp)
        return Monomial(self.coeff / other.coeff, self.exp - other.exp)

    def __pow__(self, k: int) -> "Monomial":
        return Monomial(self.coeff**k, self.exp * k)

    def __neg__(self) -> "Monomial":
        return Monomial(-self.coeff, self.exp)

    def series(self, order: Rational) -> "QSeries":
        return QSeries.from_terms({self.exp: self.coeff}, order)

    def __str__(self) -> str:
        c = norm_coeff(self.coeff)
        if self.exp == 0:
            return str(c)
        body = _fmt_exp(self.exp)
        if c == 1:
            return body
        if c == -1:
            return "-" + body
        return f"{c}*{body}"


class QSeries:
    """Immutable truncated series ``sum_k c_k q^(k/d) + O(q^order)``.

    Invariants: every stored ``k`` satisfies ``k/d < order``, no stored
    coefficient is zero, and ``d`` is the smallest grid holding all exponents.
    Negative exponents are allowed; they arise from :meth:`inverse` and
    :meth:`shift` and from Laurent-polynomial Pochhammer factors.
    """

    __slots__ = ("_c", "_d", "_order")

    def __init__(self, coeffs: Mapping[int, Rational], order: Rational, grid_den: int = 1):
        order = as_fraction(order)
        grid_den = int(grid_den)
        if grid_den < 1:
            raise ValueError("grid_den must be a positive integer")
        lim = _limit(order, grid_den)
        clean = {}
        for k, c in coeffs.items():
            if k < lim and c:
                clean[int(k)] = norm_coeff(c)
        g = grid_den
        for k in clean:
            if g == 1:
                break
            g = math.gcd(g, k)
        if g > 1:
            clean = {k // g: c for k, c in clean.items()}
            grid_den //= g
        self._c = clean
        self._d = grid_den
        self._order = order

    # construction -----------------------------------------------------------

    @classmethod
    def _raw(cls, coeffs: dict, order: Fraction, grid_den: int) -> "QSeries":
        return cls(coeffs, order, grid_den)

    @classmethod
    def from_terms(cls, terms: Mapping[Rational, Rational], order: Rational) -> "QSeries":
        """Build from ``{exponent: coefficient}`` with rational exponents."""
        exps = {as_fraction(e): c for e, c in terms.items()}
        d = 1
        for e in exps:
            d = _lcm(d, e.denominator)
        coeffs: dict = {}
        for e, c in exps.items():
            k = int(e * d)
            coeffs[k] = coeffs.get(k, 0) + as_fraction(c)
        return cls(coeffs, order, d)

    @classmethod
    def from_list(cls, coeffs: Sequence[Rational], order: Rational | None = None) -> "QSeries":
        """Dense integer-exponent constructor; default order is ``len(coeffs)``."""
        if order is None:
            order = len(coeffs)
        return cls(dict(enumerate(coeffs)), order, 1)

    @classmethod
    def one(cls, order: Rational) -> "QSeries":
        return cls({0: 1}, order, 1)

    @classmethod
    def zero(cls, order: Rational) -> "QSeries":
        return cls({}, order, 1)

    @classmethod
    def monomial(cls, coeff: Rational, exp: Rational, order: Rational) -> "QSeries":
        return cls.from_terms({exp: coeff}, order)

    # basic accessors --------------------------------------------------------

    @property
    def order(self) -> Fraction:
        return self._order

    @property
    def grid_den(self) -> int:
        return self._d

    @property
    def coeffs(self) -> dict:
        """Copy of the sparse ``{exponent numerator: coefficient}`` map."""
        return dict(self._c)

    def items(self) -> list[Tuple[Fraction, Coeff]]:
        """``(exponent, coefficient)`` pairs in ascending exponent order."""
        d = self._d
        return [(Fraction(k, d), self._c[k]) for k in sorted(self._c)]

    def __iter__(self) -> Iterator[Tuple[Fraction, Coeff]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def valuation(self) -> Fraction:
        """Least exponent with a nonzero coefficient; the order for the zero series."""
        if not self._c:
            return self._order
        return Fraction(min(self._c), self._d)

    def leading_coefficient(self) -> Coeff:
        if not self._c:
            raise ZeroLeadingTerm("series is zero to its known order")
        return self._c[min(self._c)]

    def coefficient(self, e: Rational) -> Coeff:
        e = as_fraction(e)
        if e >= self._order:
            raise BeyondOrder(f"exponent {e} is not below the truncation order {self._order}")
        k = e * self._d
        if k.denominator != 1:
            return 0
        return self._c.get(k.numerator, 0)

    __getitem__ = coefficient

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._c.values())

    def is_polynomial_in_q(self) -> bool:
        return self._d == 1

    # comparison ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._order == other._order and self._d == other._d and self._c == other._c

    def __hash__(self):
        return hash((self._order, self._d, frozenset(self._c.items())))

    def first_difference(self, other: "QSeries", below: Rational | None = None):
        """Least exponent below the common order where coefficients differ.

        Returns ``(exponent, self_coeff, other_coeff)`` or ``None``.
        """
        bound = min(self._order, other._order)
        if below is not None:
            bound = min(bound, as_fraction(below))
        d = _lcm(self._d, other._d)
        a = {k * (d // self._d): c for k, c in self._c.items()}
        b = {k * (d // other._d): c for k, c in other._c.items()}
        lim = _limit(bound, d)
        for k in sorted(set(a) | set(b)):
            if k >= lim:
                break
            ca, cb = a.get(k, 0), b.get(k, 0)
            if ca != cb:
                return Fraction(k, d), ca, cb
        return None

    def agrees_with(self, other: "QSeries", below: Rational | None = None) -> bool:
        return self.first_difference(other, below) is None

    # grid helpers ------------------------------------------------------------

    def _on_grid(self, d: int) -> dict:
        if d == self._d:
            return self._c
        f = d // self._d
        return {k * f: c for k, c in self._c.items()}

    # arithmetic --------------------------------------------------------------

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, Monomial):
            return other.series(self._order + max(other.exp, 0) + 1)
        if isinstance(other, (int, Fraction)):
            return QSeries({0: other}, self._order, 1)
        return NotImplemented

    def __add__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            other = QSeries({0: other}, self._order, 1)
        elif not isinstance(other, QSeries):
            return NotImplemented
        d = _lcm(self._d, other._d)
        out = dict(self._on_grid(d))
        for k, c in other._on_grid(d).items():
            out[k] = out.get(k, 0) + c
        return QSeries(out, min(self._order, other._order), d)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries({k: -c for k, c in self._c.items()}, self._order, self._d)

    def __sub__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def scale(self, c: Rational) -> "QSeries":
        c = norm_coeff(c)
        if c == 0:
            return QSeries({}, self._order, 1)
        return QSeries({k: v * c for k, v in self._c.items()}, self._order, self._d)

    def shift(self, e: Rational) -> "QSeries":
        """Multiply by ``q^e``; the order moves with it."""
        e = as_fraction(e)
        d = _lcm(self._d, e.denominator)
        s = int(e * d)
        return QSeries({k + s: c for k, c in self._on_grid(d).items()}, self._order + e, d)

    def truncate(self, order: Rational) -> "QSeries":
        order = as_fraction(order)
        if order > self._order:
            raise BeyondOrder(f"cannot raise truncation order {self._order} to {order}")
        return QSeries(self._c, order, self._d)

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Monomial):
            return self.shift(other.exp).scale(other.coeff)
        if not isinstance(other, QSeries):
            return NotImplemented
        vs, vt = self.valuation(), other.valuation()
        order = min(self._order + vt, other._order + vs)
        d = _lcm(self._d, other._d)
        lim = _limit(order, d)
        a = sorted(self._on_grid(d).items())
        b = sorted(other._on_grid(d).items())
        out: dict = {}
        get = out.get
        for ka, ca in a:
            cut = lim - ka
            for kb, cb in b:
                if kb >= cut:
                    break
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return QSeries(out, order, d)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        """Multiplicative inverse, shifting out the leading power first.

        For valuation ``v`` and order ``O`` the result has order ``O - 2v``,
        which makes ``s * s.inverse()`` exact below ``O - v``.
        """
        if not self._c:
            raise ZeroLeadingTerm("cannot invert a series that is zero to its known order")
        d = self._d
        k0 = min(self._c)
        v = Fraction(k0, d)
        lead = self._c[k0]
        unit = sorted((k - k0, c) for k, c in self._c.items() if k != k0)
        n = _limit(self._order - v, d)
        r = [0] * n
        if n:
            inv_lead = norm_coeff(Fraction(1) / lead) if lead not in (1, -1) else lead
            r[0] = inv_lead
            for i in range(1, n):
                acc = 0
                for j, c in unit:
                    if j > i:
                        break
                    rv = r[i - j]
                    if rv:
                        acc += c * rv
                if acc:
                    r[i] = norm_coeff(-acc * inv_lead)
        out = {i - k0: c for i, c in enumerate(r) if c}
        return QSeries(out, self._order - 2 * v, d)

    def __truediv__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / as_fraction(other))
        if isinstance(other, Monomial):
            return self.shift(-other.exp).scale(1 / other.coeff)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "QSeries":
        return self.inverse() * other

    def __pow__(self, k: int) -> "QSeries":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return QSeries.one(self._order)
        base = self
        result = None
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # binomial fast paths ------------------------------------------------------

    def mul_binomial(self, c: Rational, e: Rational) -> "QSeries":
        """``self * (1 - c q^e)`` for ``e > 0`` in linear time."""
        return _apply_binomials(self, [(c, as_fraction(e))], [])

    def div_binomial(self, c: Rational, e: Rational) -> "QSeries":
        """``self / (1 - c q^e)`` for ``e > 0`` in linear time."""
        return _apply_binomials(self, [], [(c, as_fraction(e))])

    # substitutions ---------------------------------------------------------------

    def substitute_power(self, m: Rational) -> "QSeries":
        """The substitution ``q -> q^m`` for positive rational ``m``."""
        m = as_fraction(m)
        if m <= 0:
            raise ValueError("substitute_power needs a positive rational")
        return QSeries(
            {k * m.numerator: c for k, c in self._c.items()},
            self._order * m,
            self._d * m.denominator,
        )

    def negate_q(self) -> "QSeries":
        """The substitution ``q -> -q``; defined only on integer exponents."""
        if self._d != 1:
            raise FractionalGrid("q -> -q needs integer exponents (grid_den = 1)")
        return QSeries({k: (-c if k & 1 else c) for k, c in self._c.items()}, self._order, 1)

    def negate_root(self) -> "QSeries":
        """The substitution ``q^(1/2) -> -q^(1/2)`` on a grid dividing 2."""
        if 2 % self._d:
            raise FractionalGrid("q^(1/2) -> -q^(1/2) needs grid_den in {1, 2}")
        f = 2 // self._d
        return QSeries(
            {k: (-c if (k * f) & 1 else c) for k, c in self._c.items()}, self._order, self._d
        )

    # serialisation -------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "grid_den": self._d,
            "order": [self._order.numerator, self._order.denominator],
            "terms": [
                [k, Fraction(c).numerator, Fraction(c).denominator] for k, c in sorted(self._c.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "QSeries":
        d = int(obj["grid_den"])
        num, den = obj["order"]
        coeffs = {int(k): Fraction(int(p), int(q)) for k, p, q in obj["terms"]}
        s = cls(coeffs, Fraction(int(num), int(den)), d)
        if s._d != d:
            raise ValueError(f"grid_den {d} is not reduced (canonical grid is {s._d})")
        return s

    def __str__(self) -> str:
        parts = []
        for e, c in self.items():
            c = norm_coeff(c)
            neg = c < 0
            a = -c if neg else c
            if e == 0:
                body = _fmt_coeff(a)
            elif a == 1:
                body = _fmt_exp(e)
            else:
                body = f"{_fmt_coeff(a)}*{_fmt_exp(e)}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        head = "".join(parts) if parts else "0"
        o = self._order
        tail = f"q^{o.numerator}" if o.denominator == 1 else f"q^({o.numerator}/{o.denominator})"
        return f"{head} (+O({tail}))"

    def __repr__(self) -> str:
        return f"QSeries({self})"


# ---------------------------------------------------------------------------
# dense kernel for products of binomials


def _apply_binomials(
    base: QSeries,
    num: Iterable[Tuple[Rational, Fraction]],
    den: Iterable[Tuple[Rational, Fraction]],
) -> QSeries:
    """``base * prod(1 - c q^e) / prod(1 - c q^e)`` with every ``e > 0``."""
    num = [(norm_coeff(c), as_fraction(e)) for c, e in num]
    den = [(norm_coeff(c), as_fraction(e)) for c, e in den]
    d = base.grid_den
    for _, e in num + den:
        if e <= 0:
            raise ValueError("binomial factors need a positive exponent")
        d = _lcm(d, e.denominator)
    if base.is_zero():
        return QSeries({}, base.order, 1)
    k0 = min(base._c)
    v = Fraction(k0, base.grid_den)
    n = _limit(base.order - v, d)
    f = d // base.grid_den
    a = [0] * n
    for k, c in base._c.items():
        i = k * f - k0 * f
        if i < n:
            a[i] = c
    top = max((k - k0) * f for k in base._c)
    top = min(top, n - 1)
    top = _dense_products(a, n, d, top, num, den)
    return QSeries({i + k0 * f: c for i, c in enumerate(a) if c}, base.order, d)


def _dense_products(a: list, n: int, d: int, top: int, num, den) -> int:
    """In-place dense multiply/divide of ``a`` (length ``n``, grid ``d``)."""
    for c, e in num:
        m = int(e * d)
        if m >= n:
            continue
        hi = min(n - 1, top + m)
        if c == 1:
            for i in range(hi, m - 1, -1):
                x = a[i - m]
                if x:
                    a[i] -= x
        elif c == -1:
            for i in range(hi, m - 1, -1):
                x = a[i - m]
                if x:
                    a[i] += x
        else:
            for i in range(hi, m - 1, -1):
                x = a[i - m]
                if x:
                    a[i] = norm_coeff(a[i] - c * x)
        top = hi
    for c, e in den:
        m = int(e * d)
        if m >= n:
            continue
        if c == 1:
            for i in range(m, n):
                x = a[i - m]
                if x:
                    a[i] += x
        elif c == -1:
            for i in range(m, n):
                x = a[i - m]
                if x:
                    a[i] -= x
        else:
            for i in range(m, n):
                x = a[i - m]
                if x:
                    a[i] = norm_coeff(a[i] + c * x)
        top = n - 1
    return top


def binomial_product(
    coeff: Rational,
    exp: Rational,
    num: Sequence[Tuple[Rational, Rational]],
    den: Sequence[Tuple[Rational, Rational]],
    order: Rational,
) -> QSeries:
    """``coeff * q^exp * prod_num(1 - c q^e) / prod_den(1 - c q^e)`` to ``order``.

    Every factor exponent must be positive, so the product part is a unit with
    constant term 1 and the result has valuation exactly ``exp``.  Factors at
    or beyond the needed precision are skipped.
    """
    exp = as_fraction(exp)
    order = as_fraction(order)
    coeff = norm_coeff(coeff)
    if coeff == 0 or exp >= order:
        return QSeries({}, order, 1)
    num = [(norm_coeff(c), as_fraction(e)) for c, e in num]
    den = [(norm_coeff(c), as_fraction(e)) for c, e in den]
    d = exp.denominator
    for _, e in num + den:
        if e <= 0:
            raise ValueError("binomial factors need a positive exponent")
        d = _lcm(d, e.denominator)
    n = _limit(order - exp, d)
    a = [0] * n
    a[0] = coeff
    _dense_products(a, n, d, 0, num, den)
    s = int(exp * d)
    return QSeries({i + s: c for i, c in enumerate(a) if c}, order, d)


def series_sum(terms: Iterable[QSeries], order: Rational) -> QSeries:
    """Sum of many series on a shared accumulator; result order is the min."""
    order = as_fraction(order)
    acc: dict = {}
    d = 1
    parts = []
    for t in terms:
        parts.append(t)
        d = _lcm(d, t.grid_den)
        order = min(order, t.order)
    for t in parts:
        for k, c in t._on_grid(d).items():
            acc[k] = acc.get(k, 0) + c
    return QSeries(acc, order, d)
