"""Identity records: both sides as expression text plus the proof route.

The catalog ships as ``data/catalog.json`` (override with the
``QIDENT_CATALOG`` environment variable).  Each record is::

    {"id": "m18-1", "eq_tag": "1.3", "family": "mod18",
     "lhs": "<expression>", "rhs": "<expression>", "recipe": {...}}

Recipe kinds: ``lemma`` (pair, lemma, a, scale, optional offset), ``combination``
(terms of coeff * id), ``qbailey`` (b, c, scale), ``qgauss`` (a, b, scale),
``multisum`` (family, k, i), ``external`` and ``direct``.  For the first
three the record equals ``scale * (route - offset)`` on both sides.  A record may carry
``printed_lhs`` when the stored sum side corrects a misprint.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional, Tuple

from .bailey import apply_lemma, make_pair
from .errors import NonIntegralResult, UnknownLabel, UnsupportedSpecialization
from .expr import Node, expand, grid_hint, parse, render, to_monomial
from .multisum import MultisumSpec, multisum, product_side
from .products import FactorProduct
from .series import Monomial, QSeries, as_fraction, series_sum

SIDES = ("lhs", "rhs")


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    eq_tag: str
    family: str
    lhs: str
    rhs: str
    recipe: dict = field(compare=False, hash=False)
    printed_lhs: Optional[str] = None

    @property
    def lhs_ast(self) -> Node:
        return _parsed(self.lhs)

    @property
    def rhs_ast(self) -> Node:
        return _parsed(self.rhs)

    def side(self, which: str) -> Node:
        if which not in SIDES:
            raise ValueError(f"side must be 'lhs' or 'rhs', got {which!r}")
        return self.lhs_ast if which == "lhs" else self.rhs_ast

    @property
    def grid(self) -> int:
        """Exponent grid needed by the record (2 if half-integer exponents occur)."""
        return max(grid_hint(self.lhs_ast), grid_hint(self.rhs_ast))

    @property
    def recipe_kind(self) -> str:
        return self.recipe.get("kind", "direct")

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "eq_tag": self.eq_tag,
            "family": self.family,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "recipe": self.recipe,
        }
        if self.printed_lhs is not None:
            out["printed_lhs"] = self.printed_lhs
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "IdentityRecord":
        return cls(
            obj["id"], obj["eq_tag"], obj["family"], obj["lhs"], obj["rhs"],
            obj.get("recipe", {"kind": "direct"}), obj.get("printed_lhs"),
        )


@lru_cache(maxsize=None)
def _parsed(text: str) -> Node:
    return parse(text)


def _tag_key(tag: str) -> Tuple[int, ...]:
    return tuple(int(p) for p in tag.split("."))


class Catalog:
    """Immutable, ordered collection of identity records."""

    def __init__(self, records: List[IdentityRecord]):
        ordered = sorted(records, key=lambda r: _tag_key(r.eq_tag))
        self._records = tuple(ordered)
        self._by_id = {r.id: r for r in ordered}
        if len(self._by_id) != len(ordered):
            raise ValueError("duplicate identity ids in catalog")

    def __iter__(self):
        return iter(self._records)

    def __len__(self):
        return len(self._records)

    def __contains__(self, id: str) -> bool:
        return id in self._by_id

    def ids(self) -> List[str]:
        return [r.id for r in self._records]

    def get(self, id: str) -> IdentityRecord:
        try:
            return self._by_id[id]
        except KeyError:
            raise UnknownLabel(f"unknown identity id {id!r}") from None

    def to_json(self) -> dict:
        return {"schema": 1, "records": [r.to_json() for r in self._records]}

    @classmethod
    def from_json(cls, obj: dict) -> "Catalog":
        return cls([IdentityRecord.from_json(r) for r in obj["records"]])

    @classmethod
    def load(cls, path: Optional[str] = None) -> "Catalog":
        path = path or os.environ.get("QIDENT_CATALOG")
        if path:
            with open(path, encoding="utf-8") as fh:
                return cls.from_json(json.load(fh))
        text = resources.files("qident").joinpath("data/catalog.json").read_text(encoding="utf-8")
        return cls.from_json(json.loads(text))


_loaded: Dict[Optional[str], Catalog] = {}


def default_catalog() -> Catalog:
    key = os.environ.get("QIDENT_CATALOG")
    if key not in _loaded:
        _loaded[key] = Catalog.load(key)
    return _loaded[key]


def get_record(id: str, catalog: Optional[Catalog] = None) -> IdentityRecord:
    return (catalog or default_catalog()).get(id)


def list_identities(catalog: Optional[Catalog] = None) -> List[Tuple[str, str, str]]:
    """``(id, eq_tag, family)`` in equation order."""
    return [(r.id, r.eq_tag, r.family) for r in (catalog or default_catalog())]


def build_side(id: str, side: str, order, catalog: Optional[Catalog] = None) -> QSeries:
    """Expand one side of a record; raises :class:`NonIntegralResult` on a fractional coefficient."""
    rec = get_record(id, catalog)
    s = expand(rec.side(side), order)
    if not s.is_integral():
        bad = next(e for e, c in s.items() if not isinstance(c, int))
        raise NonIntegralResult(f"{id} {side}: coefficient of q^{bad} is {s.coefficient(bad)}")
    return s


# ---------------------------------------------------------------------------
# conjugate root-of-unity specialisations

# root name -> (sign of the angle, twice the real part: b + 1/b)
_ROOTS = {
    "e^(pi*i/3)": (1, 6, 1),
    "e^(-pi*i/3)": (-1, 6, 1),
    "e^(2*pi*i/3)": (1, 3, -1),
    "e^(-2*pi*i/3)": (-1, 3, -1),
}


def _root(kind: str) -> Tuple[int, int, int, int]:
    """``(sign, period, trace, q-shift)`` for names like ``q^2*e^(pi*i/3)``."""
    text = kind.replace(" ", "")
    shift = 0
    if "*" in text and text.startswith("q"):
        head, text = text.split("*", 1)
        m = to_monomial(parse(head))
        if m is None or m.coeff != 1 or not m.exp.is_const():
            raise UnsupportedSpecialization(f"unsupported prefix in {kind!r}")
        shift = m.exp.constant
    if text not in _ROOTS:
        raise UnsupportedSpecialization(f"{kind!r} is not one of {', '.join(_ROOTS)} (optionally times q^k)")
    sign, period, trace = _ROOTS[text]
    return sign, period, trace, shift


def _quads(fp: FactorProduct, t: int, start: Fraction, step: int, count: Optional[int], order: Fraction):
    """Include prod_j (1 - t x_j + x_j^2), x_j = q^(start + j*step), finite or up to ``order``."""
    j = 0
    while count is None or j < count:
        e = start + j * step
        if count is None and e >= order:
            break
        fp.quad(t, e)
        j += 1


def _settle_sum(term, order: Fraction) -> QSeries:
    terms = []
    n = 0
    while True:
        fp = term(n)
        if fp.exp >= order and n > 0:
            break
        if not fp.is_zero():
            terms.append(fp.build(order))
        n += 1
    return series_sum(terms, order)


def specialize_qgauss(a_kind: str, b_kind: str, order) -> Tuple[QSeries, QSeries]:
    """Both sides of the q-Gauss sum at conjugate ``a``, ``b`` on the unit circle (times ``q^s``).

    sum q^(n(n+1)) (a;q^2)_n (b;q^2)_n / ((q^2;q^2)_n (abq^2;q^4)_n)
        = (aq^2;q^4)_inf (bq^2;q^4)_inf / ((q^2;q^4)_inf (abq^2;q^4)_inf)
    """
    order = as_fraction(order)
    sa, pa, t, s = _root(a_kind)
    sb, pb, tb, sb_shift = _root(b_kind)
    if pa != pb or sa != -sb or s != sb_shift:
        raise UnsupportedSpecialization(f"{a_kind} and {b_kind} are not a conjugate pair")
    ab = 2 * s  # ab = q^(2s)

    def term(n):
        fp = FactorProduct(1, n * (n + 1))
        _quads(fp, t, s, 2, n, order)
        fp.poch(Monomial(1, 2), 2, n, -1)
        fp.poch(Monomial(1, ab + 2), 4, n, -1)
        return fp

    lhs = _settle_sum(term, order)
    fp = FactorProduct()
    _quads(fp, t, s + 2, 4, None, order)
    fp.poch(Monomial(1, 2), 4, None, -1).poch(Monomial(1, ab + 2), 4, None, -1)
    return lhs, fp.build(order)


def specialize_qbailey(b_kind: str, c, order) -> Tuple[QSeries, QSeries]:
    """Both sides of the q-analogue of Bailey's sum with ``b`` a sixth or third root of unity.

    sum (bq;q^2)_n (q/b;q^2)_n c^n q^(n^2) / ((cq;q^2)_n (q^4;q^4)_n)
        = (cq^2/b;q^4)_inf (bcq^2;q^4)_inf / (cq;q^2)_inf
    """
    order = as_fraction(order)
    _, _, t, shift = _root(b_kind)
    if shift:
        raise UnsupportedSpecialization("b must lie on the unit circle")
    if isinstance(c, str):
        m = to_monomial(parse(c))
        if m is None or not m.exp.is_const():
            raise UnsupportedSpecialization(f"c must be a fixed monomial, got {c!r}")
        c = m.at()
    if not isinstance(c, Monomial):
        c = Monomial(c, 0)
    if c.coeff not in (1, -1):
        raise UnsupportedSpecialization("c must be +-q^k so the conjugate factors pair up")
    tc = t * int(c.coeff)

    def term(n):
        fp = FactorProduct(1, n * n)
        fp.monomial(c, n)
        _quads(fp, t, Fraction(1), 2, n, order)
        fp.poch(c * Monomial(1, 1), 2, n, -1)
        fp.poch(Monomial(1, 4), 4, n, -1)
        return fp

    lhs = _settle_sum(term, order)
    fp = FactorProduct()
    _quads(fp, tc, c.exp + 2, 4, None, order)
    fp.poch(c * Monomial(1, 1), 2, None, -1)
    return lhs, fp.build(order)


# ---------------------------------------------------------------------------
# recipes


@dataclass(frozen=True)
class RecipeReport:
    id: str
    kind: str
    outcome: str  # "pass", "fail" or "n/a"
    side: Optional[str] = None
    first_discrepancy: Optional[tuple] = None

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"

    def __str__(self):
        if self.outcome == "fail":
            e, a, b = self.first_discrepancy
            return f"{self.id} [{self.kind}]: {self.side} differs at q^{e} ({a} vs {b})"
        return f"{self.id} [{self.kind}]: {self.outcome}"


def _affine(recipe: dict, route, order: Fraction) -> Tuple[QSeries, QSeries]:
    """Apply ``record = scale * (route - offset)``; ``route(order)`` gives both route sides."""
    scale = expand(recipe.get("scale", "1"), order + 8)
    lift = max(Fraction(0), -scale.valuation())
    lhs, rhs = route(order + lift)
    if "offset" in recipe:
        off = expand(recipe["offset"], order + lift)
        lhs, rhs = lhs - off, rhs - off
    scale = scale.truncate(order + lift)
    return (lhs * scale).truncate(order), (rhs * scale).truncate(order)


def route_sides(id: str, order, catalog: Optional[Catalog] = None) -> Tuple[QSeries, QSeries]:
    """The (lhs, rhs) pair produced by a record's recipe, to compare with the record."""
    order = as_fraction(order)
    rec = get_record(id, catalog)
    r = rec.recipe
    kind = rec.recipe_kind
    if kind == "lemma":
        a = to_monomial(parse(r["a"])).at()
        pair = make_pair(r["pair"])
        return _affine(r, lambda o: apply_lemma(pair, r["lemma"], o, rel=int(a.exp)), order)
    if kind == "qgauss":
        return _affine(r, lambda o: specialize_qgauss(r["a"], r["b"], o), order)
    if kind == "qbailey":
        return _affine(r, lambda o: specialize_qbailey(r["b"], r["c"], o), order)
    if kind == "multisum":
        spec = MultisumSpec(r["family"], r["k"], r.get("i"))
        return multisum(spec, order), product_side(spec, order)
    if kind == "combination":
        coeffs = [(expand(t["coeff"], order), t["id"]) for t in r["terms"]]
        lift = max(max(Fraction(0), -c.valuation()) for c, _ in coeffs)
        sides = []
        for side in SIDES:
            parts = [c * build_side(i, side, order + lift, catalog) for c, i in coeffs]
            sides.append(series_sum(parts, order))
        return sides[0], sides[1]
    raise UnknownLabel(f"{id} has no checkable recipe (kind {kind!r})")


CHECKABLE = ("lemma", "qgauss", "qbailey", "multisum", "combination")


def recipe_check(id: str, order, catalog: Optional[Catalog] = None) -> RecipeReport:
    """Check that the record's proof route reproduces both of its sides below ``order``."""
    rec = get_record(id, catalog)
    kind = rec.recipe_kind
    if kind not in CHECKABLE:
        return RecipeReport(id, kind, "n/a")
    lhs, rhs = route_sides(id, order, catalog)
    for side, got in zip(SIDES, (lhs, rhs)):
        want = build_side(id, side, order, catalog)
        d = want.first_difference(got, order)
        if d is not None:
            return RecipeReport(id, kind, "fail", side, d)
    return RecipeReport(id, kind, "pass")
