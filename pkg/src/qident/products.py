"""Pochhammer symbols, Ramanujan theta functions and their product forms.

Everything here returns :class:`~qident.series.QSeries`.  Products of
Pochhammer factors are assembled by :class:`FactorProduct`, which normalises
each factor ``1 - c q^e`` so that only positive exponents reach the dense
kernel; constant factors and negative powers are folded into a monomial
prefactor.  That keeps the valuation of every product known before it is
expanded, which the summation code relies on for its stopping rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple, Union

from .errors import DivergentBase, DomainViolation, ZeroLeadingTerm
from .polys import IndexPoly
from .series import Monomial, QSeries, Rational, as_fraction, binomial_product

Step = Union[Rational, Monomial]


def _step_monomial(step: Step) -> Monomial:
    if isinstance(step, Monomial):
        m = step
    else:
        m = Monomial(1, step)
    if m.exp <= 0:
        raise DomainViolation(f"Pochhammer step must have positive exponent, got {m}")
    return m


class FactorProduct:
    """Accumulates ``c q^s * prod (1 - c_j q^(e_j))^(+-1)`` before expansion.

    Zero factors ``(1 - 1)`` may carry a *weight*: when a specialisation sits
    on a removable singularity, each vanishing factor behaves like
    ``-weight * eps`` and equal numbers of numerator and denominator zeros
    cancel to the ratio of their weights.
    """

    def __init__(self, coeff: Rational = 1, exp: Rational = 0):
        self.coeff = as_fraction(coeff)
        self.exp = as_fraction(exp)
        self.num: List[Tuple[Fraction, Fraction]] = []
        self.den: List[Tuple[Fraction, Fraction]] = []
        self.inf: List[Tuple[Fraction, Fraction, Fraction, Fraction, int]] = []
        self.zero_num: List[Optional[Fraction]] = []
        self.zero_den: List[Optional[Fraction]] = []
        self.series_factors: List[QSeries] = []

    # accumulation -------------------------------------------------------------

    def monomial(self, m: Monomial, power: int = 1) -> "FactorProduct":
        self.coeff *= m.coeff**power
        self.exp += m.exp * power
        return self

    def scalar(self, c: Rational) -> "FactorProduct":
        self.coeff *= as_fraction(c)
        return self

    def binomial(self, c: Rational, e: Rational, power: int = 1, weight=None) -> "FactorProduct":
        """Include ``(1 - c q^e)^power``."""
        c, e = as_fraction(c), as_fraction(e)
        if power == 0:
            return self
        if e > 0:
            target = self.num if power > 0 else self.den
            target.extend([(c, e)] * abs(power))
        elif e == 0:
            if c == 1:
                target = self.zero_num if power > 0 else self.zero_den
                target.extend([weight] * abs(power))
            else:
                self.coeff *= (1 - c) ** power
        else:
            # 1 - c q^e = -c q^e (1 - q^-e / c)
            self.coeff *= (-c) ** power
            self.exp += e * power
            target = self.num if power > 0 else self.den
            target.extend([(1 / c, -e)] * abs(power))
        return self

    def poch(self, base: Monomial, step: Step, length: Optional[int], power: int = 1, weight=None):
        """Include ``(base; step)_length^power``; ``length=None`` is infinite.

        Negative lengths follow ``(x;s)_{-m} = 1/(x s^{-m}; s)_m``.
        """
        s = _step_monomial(step)
        if length is None:
            j = 0
            # factors with nonpositive exponent are finitely many; normalise them now
            while base.exp + j * s.exp <= 0:
                c = base.coeff * s.coeff**j
                self.binomial(c, base.exp + j * s.exp, power, weight)
                j += 1
            self.inf.append((base.coeff * s.coeff**j, base.exp + j * s.exp, s.coeff, s.exp, power))
            return self
        length = int(length)
        if length < 0:
            m = -length
            shifted = Monomial(base.coeff / s.coeff**m, base.exp - m * s.exp)
            return self.poch(shifted, s, m, -power, weight)
        for j in range(length):
            self.binomial(base.coeff * s.coeff**j, base.exp + j * s.exp, power, weight)
        return self

    def quad(self, t: int, e: Rational, power: int = 1) -> "FactorProduct":
        """Include ``(1 - t q^e + q^(2e))^power`` for ``t`` in {-1, 0, 1}.

        With ``x = q^e``: ``1 - x + x^2 = (1 + x^3)/(1 + x)`` and
        ``1 + x + x^2 = (1 - x^3)/(1 - x)``, so conjugate root pairs stay
        inside rational binomial arithmetic.
        """
        e = as_fraction(e)
        if t not in (-1, 0, 1):
            raise ValueError("quadratic factor needs t in {-1, 0, 1}")
        if e == 0:
            self.coeff *= Fraction(2 - t) ** power
        elif t == 1:
            self.binomial(-1, 3 * e, power).binomial(-1, e, -power)
        elif t == -1:
            self.binomial(1, 3 * e, power).binomial(1, e, -power)
        else:
            self.binomial(-1, 2 * e, power)
        return self

    def series(self, s: QSeries, power: int = 1) -> "FactorProduct":
        """Include an already expanded series factor (multiplied in at build time)."""
        if power < 0:
            if s.is_zero():
                raise ZeroLeadingTerm("division by a series that is zero to its order")
            v = s.valuation()
            s = s.shift(-v)
            self.exp += v * power
            s = s.inverse()
            power = -power
        else:
            v = s.valuation() if not s.is_zero() else None
            if v is not None:
                self.exp += v * power
                s = s.shift(-v)
            else:
                self.coeff = Fraction(0)
        self.series_factors.extend([s] * power)
        return self

    # evaluation ----------------------------------------------------------------

    def is_zero(self) -> bool:
        if self.coeff == 0:
            return True
        return len(self.zero_num) > len(self.zero_den)

    def _resolved_coeff(self) -> Fraction:
        if len(self.zero_num) < len(self.zero_den):
            raise ZeroLeadingTerm("product has an uncancelled zero factor in its denominator")
        if len(self.zero_num) > len(self.zero_den):
            return Fraction(0)
        c = self.coeff
        if self.zero_num:
            if None in self.zero_num or None in self.zero_den:
                raise ZeroLeadingTerm("0/0 factor without a limiting weight")
            for w in self.zero_num:
                c *= w
            for w in self.zero_den:
                c /= w
        return c

    def valuation(self) -> Fraction:
        """Exact valuation of the product (``exp``) unless it vanishes."""
        return self.exp

    def build(self, order: Rational) -> QSeries:
        order = as_fraction(order)
        c = self._resolved_coeff()
        if c == 0 or self.exp >= order:
            return QSeries.zero(order)
        target = order - self.exp
        num = list(self.num)
        den = list(self.den)
        for c0, e0, sc, se, power in self.inf:
            j = 0
            while e0 + j * se < target:
                entry = (c0 * sc**j, e0 + j * se)
                (num if power > 0 else den).extend([entry] * abs(power))
                j += 1
        result = binomial_product(c, self.exp, num, den, order)
        for s in self.series_factors:
            # unit factors: valuation 0, so the product keeps order if s is precise enough
            result = result * s
        return result


# ---------------------------------------------------------------------------
# factor templates


@dataclass(frozen=True)
class PochFactor:
    """``(c q^{base_exp(n)}; q^{step_exp})_{length(n)}``; ``length=None`` means infinite."""

    base_coeff: Fraction
    base_exp: IndexPoly
    step_exp: Fraction
    length: Optional[IndexPoly]

    def __post_init__(self):
        object.__setattr__(self, "base_coeff", as_fraction(self.base_coeff))
        object.__setattr__(self, "base_exp", IndexPoly.coerce(self.base_exp))
        object.__setattr__(self, "step_exp", as_fraction(self.step_exp))
        if self.length is not None:
            object.__setattr__(self, "length", IndexPoly.coerce(self.length))
        if self.step_exp <= 0:
            raise DomainViolation("Pochhammer step exponent must be positive")

    def at(self, env=None) -> Tuple[Monomial, Fraction, Optional[int]]:
        base = Monomial(self.base_coeff, self.base_exp(env))
        if self.length is None:
            return base, self.step_exp, None
        n = self.length(env)
        if n.denominator != 1:
            raise DomainViolation(f"Pochhammer length {n} is not an integer")
        return base, self.step_exp, int(n)

    def expand(self, order: Rational, env=None) -> QSeries:
        base, step, n = self.at(env)
        if n is None:
            return poch_infinite(base, step, order)
        return poch_finite(base, step, n, order)


@dataclass(frozen=True)
class QuadFactor:
    """``prod_j (1 - t q^{e_j} + q^{2 e_j})`` with ``e_j = base_exp + j*step_exp``.

    This is the product of a conjugate pair ``(b x; q^k)(b' x; q^k)`` with
    ``b + b' = t`` and ``b b' = 1`` (``t = 1`` for ``b = e^{i pi/3}``,
    ``t = -1`` for ``b = e^{2 i pi/3}``).
    """

    linear_coeff: int
    base_exp: IndexPoly
    step_exp: Fraction
    length: Optional[IndexPoly]

    def __post_init__(self):
        if self.linear_coeff not in (-1, 0, 1):
            raise ValueError("linear_coeff must be -1, 0 or 1")
        object.__setattr__(self, "base_exp", IndexPoly.coerce(self.base_exp))
        object.__setattr__(self, "step_exp", as_fraction(self.step_exp))
        if self.length is not None:
            object.__setattr__(self, "length", IndexPoly.coerce(self.length))

    def include(self, fp: FactorProduct, env=None, power: int = 1, order: Rational | None = None):
        e0 = self.base_exp(env)
        if self.length is None:
            if order is None:
                raise ValueError("infinite quadratic factor needs a target order")
            j = 0
            limit = as_fraction(order) - fp.exp
            while e0 + j * self.step_exp < limit:
                fp.quad(self.linear_coeff, e0 + j * self.step_exp, power)
                j += 1
            return fp
        n = self.length(env)
        for j in range(int(n)):
            fp.quad(self.linear_coeff, e0 + j * self.step_exp, power)
        return fp


def quad_poch(factor: QuadFactor, order: Rational, env=None) -> QSeries:
    fp = FactorProduct()
    factor.include(fp, env, 1, order)
    return fp.build(order)


# ---------------------------------------------------------------------------
# Pochhammer symbols


def poch_finite(base: Monomial, step: Step, n: int, order: Rational) -> QSeries:
    """``(base; step)_n`` truncated to ``order``."""
    return FactorProduct().poch(base, step, n).build(order)


def poch_infinite(base: Monomial, step: Step, order: Rational) -> QSeries:
    """``(base; step)_inf``; the base must satisfy ``exp >= 0`` and not equal 1."""
    s = _step_monomial(step)
    if base.exp < 0:
        raise DomainViolation(f"infinite product base {base} has negative exponent")
    if base.exp == 0 and base.coeff == 1:
        raise DivergentBase("(1;q)_inf contains the factor (1 - 1)")
    return FactorProduct().poch(base, s, None).build(order)


def poch_multi(bases: Iterable[Monomial], step: Step, length: Optional[int], order: Rational) -> QSeries:
    """``(a_1, ..., a_r; step)_length``."""
    fp = FactorProduct()
    for b in bases:
        if length is None and b.exp == 0 and b.coeff == 1:
            raise DivergentBase("(1;q)_inf contains the factor (1 - 1)")
        fp.poch(b, step, length)
    return fp.build(order)


# ---------------------------------------------------------------------------
# theta functions


def _quadratic_window(alpha: Fraction, beta: Fraction, bound: Fraction) -> range:
    """Integers ``n`` where ``alpha n^2 + beta n < bound`` may hold (``alpha > 0``)."""
    disc = float(beta) ** 2 + 4 * float(alpha) * float(bound)
    if disc < 0:
        return range(0)
    root = math.sqrt(disc)
    lo = math.floor((-float(beta) - root) / (2 * float(alpha))) - 1
    hi = math.ceil((-float(beta) + root) / (2 * float(alpha))) + 1
    return range(lo, hi + 1)


def _theta_term(a: Monomial, b: Monomial, n: int) -> Tuple[Fraction, Fraction]:
    pa, pb = n * (n + 1) // 2, n * (n - 1) // 2
    return a.coeff**pa * b.coeff**pb, a.exp * pa + b.exp * pb


def theta_f(a: Monomial, b: Monomial, order: Rational) -> QSeries:
    """Ramanujan's ``f(a, b) = sum_{n in Z} a^{n(n+1)/2} b^{n(n-1)/2}``."""
    order = as_fraction(order)
    if a.exp + b.exp <= 0:
        raise DomainViolation(f"f({a}, {b}) needs a.exp + b.exp > 0")
    alpha = (a.exp + b.exp) / 2
    beta = (a.exp - b.exp) / 2
    terms: dict = {}
    for n in _quadratic_window(alpha, beta, order):
        c, e = _theta_term(a, b, n)
        if e < order:
            terms[e] = terms.get(e, 0) + c
    return QSeries.from_terms(terms, order)


def phi(m: Monomial, order: Rational) -> QSeries:
    """``phi(m) = f(m, m)``."""
    return theta_f(m, m, order)


def psi(m: Monomial, order: Rational) -> QSeries:
    """``psi(m) = f(m, m^3)``."""
    return theta_f(m, m**3, order)


def f_neg(m: Monomial, order: Rational) -> QSeries:
    """``f(-m) = f(-m, -m^2)``; ``f_neg(q)`` is Euler's product ``(q;q)_inf``."""
    return theta_f(-m, -(m**2), order)


def false_theta(a: Monomial, b: Monomial, order: Rational) -> QSeries:
    """``Psi(a, b) = sum_{n>=0} a^{n(n+1)/2} b^{n(n-1)/2} (1 - b^{2n+1})``."""
    order = as_fraction(order)
    if a.exp + b.exp <= 0:
        raise DomainViolation(f"Psi({a}, {b}) needs a.exp + b.exp > 0")
    terms: dict = {}
    n = 0
    prev = None
    while True:
        c, e = _theta_term(a, b, n)
        bc, be = b.coeff ** (2 * n + 1), b.exp * (2 * n + 1)
        lowest = min(e, e + be)
        if lowest >= order and prev is not None and lowest >= prev:
            break
        if e < order:
            terms[e] = terms.get(e, 0) + c
        if e + be < order:
            terms[e + be] = terms.get(e + be, 0) - c * bc
        prev = lowest
        n += 1
    return QSeries.from_terms(terms, order)


def jacobi_triple_product(a: Monomial, b: Monomial, order: Rational) -> QSeries:
    """Product side ``(-a, -b, ab; ab)_inf`` of the triple product identity."""
    ab = a * b
    if ab.exp <= 0:
        raise DomainViolation(f"triple product needs a.exp + b.exp > 0 (a={a}, b={b})")
    for m in (a, b):
        if m.exp < 0:
            raise DomainViolation(f"triple product base {m} has negative exponent")
    if Monomial(-1, 0) in (a, b):
        # (1;ab)_inf = 0, matching f(-1, b) = 0
        return QSeries.zero(order)
    return poch_multi([-a, -b, ab], ab, None, order)


def quintuple_product(w: Monomial, x: Monomial, order: Rational) -> Tuple[QSeries, QSeries, QSeries]:
    """The three equal forms of the quintuple product identity.

    Returns ``(theta sum, theta quotient, infinite product)``:

    * ``f(-w x^3, -w^2 x^-3) + x f(-w x^-3, -w^2 x^3)``
    * ``f(w/x, x) f(-w/x^2, -w x^2) / f(-w^2)``
    * ``(-w/x, -x, w; w)_inf (w/x^2, w x^2; w^2)_inf``
    """
    order = as_fraction(order)
    if w.exp <= 0:
        raise DomainViolation(f"quintuple product needs w.exp > 0, got {w}")
    args = {
        "-w x^3": -(w * x**3),
        "-w^2 x^-3": -(w**2 / x**3),
        "-w x^-3": -(w / x**3),
        "-w^2 x^3": -(w**2 * x**3),
        "w/x": w / x,
        "x": x,
        "-w/x^2": -(w / x**2),
        "-w x^2": -(w * x**2),
    }
    for name, m in args.items():
        if m.exp < 0:
            raise DomainViolation(f"quintuple product argument {name} = {m} has negative exponent")
    if order <= 0:
        z = QSeries.zero(order)
        return z, z, z
    # the sum form carries x; work to a higher order so the shift does not lose precision
    work = order + max(-x.exp, 0)
    first = theta_f(args["-w x^3"], args["-w^2 x^-3"], work)
    second = theta_f(args["-w x^-3"], args["-w^2 x^3"], work)
    total = (first + second * x).truncate(order)

    num = theta_f(args["w/x"], args["x"], order) * theta_f(args["-w/x^2"], args["-w x^2"], order)
    quotient = (num / f_neg(w**2, order)).truncate(order)

    fp = FactorProduct()
    for base in (-(w / x), -x, w):
        _check_base(base)
        fp.poch(base, w, None)
    for base in (w / x**2, w * x**2):
        _check_base(base)
        fp.poch(base, w**2, None)
    product = fp.build(order)
    return total, quotient, product


def _check_base(base: Monomial) -> None:
    if base.exp < 0:
        raise DomainViolation(f"infinite product base {base} has negative exponent")
    if base.exp == 0 and base.coeff == 1:
        raise DivergentBase(f"infinite product base {base} makes the product vanish")
