import io
import json

from hypothesis import given, settings, strategies as st

from qident import Catalog, verify, verify_all
from qident.catalog import default_catalog, get_record
from qident.verifier import SUITES, jtp_suite, qpi_suite, write_reports


def _tampered(id="m18-1", rhs_suffix=" * (1 + q)"):
    rec = get_record(id).to_json()
    rec["rhs"] = f"({rec['rhs']}){rhs_suffix}"
    return Catalog.from_json({"records": [rec]})


def test_equal_reports():
    r = verify("rr1", 50)
    assert r.outcome == "equal" and r.first_discrepancy is None and r.route == "direct"
    assert verify("m18-1", 200).ok


def test_discrepancy_is_located_at_the_first_exponent():
    r = verify("m18-1", 60, catalog=_tampered())
    assert r.outcome == "discrepant"
    assert r.first_discrepancy == (1, 0, 1)
    d = r.to_json()["first_discrepancy"]
    assert d == {"exp": [1, 1], "lhs": [0, 1], "rhs": [1, 1]}


def test_errors_are_reported_not_raised():
    rec = get_record("rr1").to_json()
    rec["lhs"] = "sum(n>=0, q^(n^2) / (q;q)_n) / 2"
    r = verify("rr1", 10, catalog=Catalog.from_json({"records": [rec]}))
    assert r.outcome == "error"
    assert "NonIntegralResult" in r.error


def test_grid_request_must_cover_exponents():
    rec = get_record("rr1").to_json()
    rec["lhs"] = rec["rhs"] = "(q^(1/2);q)_inf"
    cat = Catalog.from_json({"records": [rec]})
    assert verify("rr1", 10, catalog=cat).grid_den == 2
    assert verify("rr1", 10, catalog=cat).ok
    assert verify("rr1", 10, grid=1, catalog=cat).outcome == "error"


def test_recipe_route_is_named():
    assert verify("m18-3", 60, recipe=True).route == "lemma"
    assert verify("m18-4", 60, recipe=True).route == "recipe"
    assert verify("ft9", 60, recipe=True).route == "direct"


def test_order_zero_is_vacuous():
    s = verify_all(0)
    assert s.ok
    assert all(r.ok for r in s.reports)


def test_determinism_and_parallelism():
    a = verify_all(40, jobs=1, suites=())
    b = verify_all(40, jobs=3, suites=())
    assert [r.id for r in a.reports] == default_catalog().ids()
    pa = [json.dumps(r.payload(), sort_keys=True) for r in a.reports]
    pb = [json.dumps(r.payload(), sort_keys=True) for r in b.reports]
    assert pa == pb


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 60))
def test_monotone_in_order(order):
    # the tampered record differs at q^1 only from order 2 on
    r = verify("m18-1", order, catalog=_tampered())
    assert r.ok == (order <= 1)
    assert verify("m24t-2", order).ok


def test_json_line_schema():
    r = verify("m18-3", 30)
    line = r.to_line()
    obj = json.loads(line)
    assert set(obj) == {"id", "order", "grid_den", "outcome", "first_discrepancy", "route", "ms"}
    assert obj["order"] == [30, 1]
    assert obj["outcome"] in ("equal", "discrepant", "error")
    buf = io.StringIO()
    write_reports([r, r], buf)
    assert buf.getvalue().count("\n") == 2


def test_suites_pass_small():
    assert jtp_suite(40, count=20).passed
    assert qpi_suite(40, count=10).passed
    assert set(SUITES) == {"jtp", "qpi", "bailey-pairs", "six-psi-six", "multisum"}


def test_summary_text_mentions_counts():
    s = verify_all(10, suites=("jtp",))
    text = s.text()
    assert "41 identities: 41 equal" in text
    assert s.counts == {"equal": 41, "discrepant": 0, "error": 0}
