"""Polynomials in summation indices with rational coefficients.

Exponents such as ``9/2*r^2 - 3/2*r`` and Pochhammer lengths such as
``2*n+1`` are :class:`IndexPoly` values; they evaluate to exact rationals
once the indices are bound.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Tuple

Key = Tuple[Tuple[str, int], ...]


class IndexPoly:
    """Immutable multivariate polynomial; terms map ``((var, power), ...)`` to a coefficient."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Key, Fraction] | None = None):
        clean = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(sorted(key))] = clean.get(tuple(sorted(key)), 0) + c
        self._terms = tuple(sorted((k, v) for k, v in clean.items() if v))

    @classmethod
    def const(cls, c) -> "IndexPoly":
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str) -> "IndexPoly":
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def coerce(cls, x) -> "IndexPoly":
        if isinstance(x, IndexPoly):
            return x
        return cls.const(x)

    @property
    def terms(self):
        return self._terms

    def variables(self) -> set:
        return {v for key, _ in self._terms for v, _ in key}

    def is_const(self) -> bool:
        return all(not key for key, _ in self._terms)

    @property
    def constant(self) -> Fraction:
        for key, c in self._terms:
            if not key:
                return c
        return Fraction(0)

    def degree(self) -> int:
        return max((sum(p for _, p in key) for key, _ in self._terms), default=0)

    def __call__(self, env: Mapping[str, int] | None = None) -> Fraction:
        env = env or {}
        total = Fraction(0)
        for key, c in self._terms:
            t = c
            for v, p in key:
                if v not in env:
                    raise KeyError(f"unbound index {v!r}")
                t *= Fraction(env[v]) ** p
            total += t
        return total

    evaluate = __call__

    def __add__(self, other) -> "IndexPoly":
        other = IndexPoly.coerce(other)
        out = dict(self._terms)
        for k, c in other._terms:
            out[k] = out.get(k, 0) + c
        return IndexPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "IndexPoly":
        return IndexPoly({k: -c for k, c in self._terms})

    def __sub__(self, other) -> "IndexPoly":
        return self + (-IndexPoly.coerce(other))

    def __rsub__(self, other) -> "IndexPoly":
        return IndexPoly.coerce(other) - self

    def __mul__(self, other) -> "IndexPoly":
        other = IndexPoly.coerce(other)
        out: dict = {}
        for k1, c1 in self._terms:
            for k2, c2 in other._terms:
                powers = dict(k1)
                for v, p in k2:
                    powers[v] = powers.get(v, 0) + p
                key = tuple(sorted(powers.items()))
                out[key] = out.get(key, 0) + c1 * c2
        return IndexPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "IndexPoly":
        other = IndexPoly.coerce(other)
        if not other.is_const() or other.constant == 0:
            raise ZeroDivisionError("index polynomials divide only by nonzero constants")
        c = other.constant
        return IndexPoly({k: v / c for k, v in self._terms})

    def __pow__(self, k: int) -> "IndexPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("index polynomials take nonnegative integer powers")
        out = IndexPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = IndexPoly.const(other)
        if not isinstance(other, IndexPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def render(self) -> str:
        """Canonical text, highest total degree first (``9/2*r^2-3/2*r+1``)."""
        if not self._terms:
            return "0"
        ordered = sorted(
            self._terms, key=lambda kc: (-sum(p for _, p in kc[0]), kc[0])
        )
        out = []
        for key, c in ordered:
            mono = "*".join(v if p == 1 else f"{v}^{p}" for v, p in key)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(("-" if c < 0 else "+") + body)
        return "".join(out)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"IndexPoly({self.render()!r})"
