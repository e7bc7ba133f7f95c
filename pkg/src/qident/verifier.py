"""Verification engine: expand both sides of catalog records and compare.

Reports are plain data.  ``VerificationReport.payload()`` drops the timing so
two runs at the same order can be compared byte for byte.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, TextIO

from .bailey import LABELS, SIX_PSI_SIX_ROWS, check_pair, make_pair, six_psi_six
from .catalog import CHECKABLE, Catalog, build_side, default_catalog, recipe_check
from .errors import FractionalGrid, QSeriesError
from .multisum import FAMILIES, MultisumSpec, multisum, product_side
from .products import jacobi_triple_product, quintuple_product, theta_f
from .series import Monomial, as_fraction

OUTCOMES = ("equal", "discrepant", "error")


def _pair(x) -> List[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


@dataclass(frozen=True)
class VerificationReport:
    id: str
    order: Fraction
    grid_den: int
    outcome: str
    first_discrepancy: Optional[tuple] = None  # (exp, lhs, rhs)
    route: str = "direct"
    ms: float = 0.0
    error: Optional[str] = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return self.outcome == "equal"

    def to_json(self) -> dict:
        fd = None
        if self.first_discrepancy is not None:
            e, a, b = self.first_discrepancy
            fd = {"exp": _pair(e), "lhs": _pair(a), "rhs": _pair(b)}
        out = {
            "id": self.id,
            "order": _pair(self.order),
            "grid_den": self.grid_den,
            "outcome": self.outcome,
            "first_discrepancy": fd,
            "route": self.route,
            "ms": round(self.ms, 3),
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def payload(self) -> dict:
        """The report without its timing."""
        d = self.to_json()
        del d["ms"]
        return d

    def to_line(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)

    def __str__(self):
        head = f"{self.id:<12} {self.outcome:<10} order={self.order} grid=1/{self.grid_den} route={self.route}"
        if self.first_discrepancy is not None:
            e, a, b = self.first_discrepancy
            head += f"  first difference at q^{e}: lhs {a}, rhs {b}"
        if self.error:
            head += f"  [{self.error}]"
        return f"{head}  ({self.ms:.0f} ms)"


def verify(id: str, order, grid: Optional[int] = None, recipe: bool = False,
           catalog: Optional[Catalog] = None) -> VerificationReport:
    """Compare both sides of record ``id`` below ``order``.

    With ``recipe=True`` the record's proof route (lemma, specialisation,
    combination or multisum) is checked as well and named in ``route``.
    Errors raised while expanding are reported, not propagated.
    """
    t0 = time.perf_counter()
    catalog = catalog or default_catalog()
    order = as_fraction(order)
    rec = catalog.get(id)
    need = rec.grid
    grid_den = grid or need
    route = "direct"

    def done(outcome, diff=None, err=None):
        ms = (time.perf_counter() - t0) * 1000
        return VerificationReport(id, order, grid_den, outcome, diff, route, ms, err)

    try:
        if grid_den % need:
            raise FractionalGrid(f"{id} needs exponents on the 1/{need} grid, requested 1/{grid_den}")
        lhs = build_side(id, "lhs", order, catalog)
        rhs = build_side(id, "rhs", order, catalog)
        for s in (lhs, rhs):
            if grid_den % s.grid_den:
                raise FractionalGrid(f"{id}: exponent off the 1/{grid_den} grid")
        diff = lhs.first_difference(rhs, order)
        if diff is not None:
            return done("discrepant", diff)
        if recipe and rec.recipe_kind in CHECKABLE:
            route = "lemma" if rec.recipe_kind == "lemma" else "recipe"
            rr = recipe_check(id, order, catalog)
            if not rr.passed:
                return done("discrepant", rr.first_discrepancy, f"recipe route differs on {rr.side}")
    except QSeriesError as exc:
        return done("error", err=f"{type(exc).__name__}: {exc}")
    return done("equal")


# ---------------------------------------------------------------------------
# property suites


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    cases: int
    failures: tuple = ()
    ms: float = 0.0

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "cases": self.cases,
                "failures": list(self.failures), "ms": round(self.ms, 3)}

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        tail = f"; first failure: {self.failures[0]}" if self.failures else ""
        return f"{self.name:<16} {status}  {self.cases} cases ({self.ms:.0f} ms){tail}"


def _run_suite(name: str, cases: Iterable[tuple], check: Callable) -> SuiteResult:
    t0 = time.perf_counter()
    fails, n = [], 0
    for case in cases:
        n += 1
        try:
            msg = check(*case)
        except QSeriesError as exc:
            msg = f"{type(exc).__name__}: {exc}"
        if msg:
            fails.append(f"{case}: {msg}")
    return SuiteResult(name, not fails, n, tuple(fails), (time.perf_counter() - t0) * 1000)


def random_theta_args(count: int, seed: int = 1) -> List[tuple]:
    """Monomial pairs ``(a, b)`` with ``ab`` of positive degree, exponents on the half grid."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        ea = Fraction(rng.randint(0, 16), rng.choice((1, 2)))
        eb = Fraction(rng.randint(0, 16), rng.choice((1, 2)))
        if ea + eb == 0:
            continue
        out.append((Monomial(rng.choice((1, -1)), ea), Monomial(rng.choice((1, -1)), eb)))
    return out


def random_quintuple_args(count: int, seed: int = 2) -> List[tuple]:
    """Admissible ``(w, x)``: every theta argument of the identity has nonnegative degree."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        ew = Fraction(rng.randint(2, 24), rng.choice((1, 2)))
        ex = Fraction(rng.randint(1, 12), rng.choice((1, 2)))
        if 3 * ex > ew:
            continue
        out.append((Monomial(1, ew), Monomial(rng.choice((1, -1)), ex)))
    return out


# the two instances that enter the proofs of the mod 18 identities
QUINTUPLE_INSTANCES = ((Monomial(1, Fraction(27, 2)), Monomial(1, Fraction(3, 2))), (Monomial(1, 9), Monomial(-1, 1)))


def jtp_suite(order=100, count: int = 50, seed: int = 1) -> SuiteResult:
    def check(a, b):
        d = theta_f(a, b, order).first_difference(jacobi_triple_product(a, b, order), order)
        return d and f"differs at q^{d[0]}"
    return _run_suite("jtp", [(a, b) for a, b in random_theta_args(count, seed)], check)


def qpi_suite(order=100, count: int = 25, seed: int = 2) -> SuiteResult:
    def check(w, x):
        s, quo, prod = quintuple_product(w, x, order)
        d = s.first_difference(quo, order) or s.first_difference(prod, order)
        return d and f"differs at q^{d[0]}"
    cases = list(QUINTUPLE_INSTANCES) + random_quintuple_args(count, seed)
    return _run_suite("qpi", cases, check)


def pairs_suite(order=100, n_max: int = 25) -> SuiteResult:
    def check(label):
        r = check_pair(make_pair(label), n_max, order)
        return None if r.passed else str(r)
    return _run_suite("bailey-pairs", [(lab,) for lab in LABELS], check)


def six_psi_six_suite(order=100, n_max: int = 15) -> SuiteResult:
    def check(label, a, e, n):
        lhs, rhs = six_psi_six(a, e, n, order)
        d = lhs.first_difference(rhs, order)
        return d and f"differs at q^{d[0]}"
    cases = [(lab, a, e, n) for lab, a, e in SIX_PSI_SIX_ROWS for n in range(n_max + 1)]
    return _run_suite("six-psi-six", cases, check)


def multisum_cases(k_max: int = 3) -> List[MultisumSpec]:
    out = []
    for fam in FAMILIES:
        for k in range(1, k_max + 1):
            if fam in ("5.2", "5.3"):
                out.extend(MultisumSpec(fam, k, i) for i in range(1, k + 2))
            else:
                out.append(MultisumSpec(fam, k))
    return out


def multisum_suite(order=100, k_max: int = 3) -> SuiteResult:
    def check(spec):
        d = multisum(spec, order).first_difference(product_side(spec, order), order)
        return d and f"differs at q^{d[0]}"
    return _run_suite("multisum", [(s,) for s in multisum_cases(k_max)], check)


SUITES = {
    "jtp": jtp_suite,
    "qpi": qpi_suite,
    "bailey-pairs": pairs_suite,
    "six-psi-six": six_psi_six_suite,
    "multisum": multisum_suite,
}

# the suites are fixed-size checks; larger identity orders do not enlarge them
SUITE_ORDER = 100


# ---------------------------------------------------------------------------
# full runs


@dataclass
class Summary:
    order: Fraction
    reports: List[VerificationReport]
    suites: List[SuiteResult]

    @property
    def counts(self) -> dict:
        c = {k: 0 for k in OUTCOMES}
        for r in self.reports:
            c[r.outcome] += 1
        return c

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports) and all(s.passed for s in self.suites)

    def slowest(self, n: int = 3) -> List[VerificationReport]:
        return sorted(self.reports, key=lambda r: -r.ms)[:n]

    def lines(self) -> List[str]:
        return [r.to_line() for r in self.reports]

    def text(self) -> str:
        out = [str(r) for r in self.reports]
        out += [str(s) for s in self.suites]
        c = self.counts
        out.append(f"{len(self.reports)} identities: {c['equal']} equal, {c['discrepant']} discrepant, {c['error']} errors")
        if self.reports:
            out.append("slowest: " + ", ".join(f"{r.id} {r.ms:.0f} ms" for r in self.slowest()))
        return "\n".join(out)


def _verify_task(args):
    id, order, grid, recipe, catalog = args
    return verify(id, order, grid, recipe, catalog)


def verify_all(order, jobs: int = 1, grid: Optional[int] = None, recipe: bool = True,
               suites: Optional[Sequence[str]] = tuple(SUITES), catalog: Optional[Catalog] = None) -> Summary:
    """Verify every record (in catalog order) and run the property suites.

    ``jobs > 1`` spreads records over worker processes; the result list is
    still in catalog order.
    """
    order = as_fraction(order)
    catalog = catalog or default_catalog()
    tasks = [(id, order, grid, recipe, catalog) for id in catalog.ids()]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_task, tasks))
    else:
        reports = [_verify_task(t) for t in tasks]
    suite_order = min(order, SUITE_ORDER)
    results = [SUITES[name](suite_order) for name in (suites or ())]
    return Summary(order, reports, results)


def write_reports(reports: Iterable[VerificationReport], fh: TextIO) -> None:
    """Append reports as JSON lines."""
    for r in reports:
        fh.write(r.to_line() + "\n")
