import json

import pytest

from qident import (
    Catalog,
    NonIntegralResult,
    UnknownLabel,
    UnsupportedSpecialization,
    build_side,
    expand,
    list_identities,
    parse,
    recipe_check,
    render,
    specialize_qbailey,
    specialize_qgauss,
)
from qident.catalog import CHECKABLE, default_catalog, get_record


def test_listing_order_and_count():
    rows = list_identities()
    tags = [t for _, t, _ in rows]
    numbered = [t for t in tags if t.startswith("1.")]
    assert len(numbered) == 40
    assert numbered == [f"1.{i}" for i in range(1, 41)]
    assert ("m18-1", "1.3", "mod18") in rows
    assert rows[-1][0] == "remarkable"


def test_external_recipe_kind():
    assert get_record("ft9").recipe_kind == "external"
    assert recipe_check("ft9", 20).outcome == "n/a"


def test_rr1_sum_side_counts_partitions():
    assert str(build_side("rr1", "lhs", 8)) == "1 + q + q^2 + q^3 + 2*q^4 + 2*q^5 + 3*q^6 + 3*q^7 (+O(q^8))"


def test_normalizers():
    assert "psi(-q)" in get_record("m24t-2").rhs
    assert "phi(-q^2)" in get_record("m24s-2").rhs


def test_false_theta_two_sum_side():
    s = build_side("ft1", "rhs", 20)
    want = expand("sum(n>=0, (-1)^n*q^(18*n^2+3*n)*(1+q^(30*n+15)))", 20) - expand(
        "q*sum(n>=0, (-1)^n*q^(18*n^2+9*n)*(1+q^(18*n+9)))", 20)
    assert s.first_difference(want) is None
    assert str(s) == "1 - q - q^10 + q^15 (+O(q^20))"


@pytest.mark.parametrize("id", [r.id for r in default_catalog()])
def test_records_are_canonical_and_integral(id):
    rec = get_record(id)
    for text in (rec.lhs, rec.rhs):
        assert render(parse(text)) == text
    assert build_side(id, "lhs", 40).is_integral()
    assert build_side(id, "rhs", 40).is_integral()


def test_json_round_trip(tmp_path):
    cat = default_catalog()
    again = Catalog.from_json(json.loads(json.dumps(cat.to_json())))
    assert [r.to_json() for r in again] == [r.to_json() for r in cat]
    path = tmp_path / "cat.json"
    path.write_text(json.dumps(cat.to_json()))
    assert Catalog.load(str(path)).ids() == cat.ids()


def test_environment_override(tmp_path, monkeypatch):
    rec = get_record("rr1").to_json()
    rec["rhs"] = "(q^2,q^3,q^5;q^5)_inf / (q;q)_inf * (1 + q)"
    path = tmp_path / "one.json"
    path.write_text(json.dumps({"schema": 1, "records": [rec]}))
    monkeypatch.setenv("QIDENT_CATALOG", str(path))
    assert [r[0] for r in list_identities()] == ["rr1"]
    with pytest.raises(UnknownLabel):
        get_record("m18-1")


def test_non_integral_record_is_flagged():
    rec = get_record("rr1").to_json()
    rec["lhs"] = "sum(n>=0, q^(n^2) / (q;q)_n) / 2"
    cat = Catalog.from_json({"records": [rec]})
    with pytest.raises(NonIntegralResult):
        build_side("rr1", "lhs", 10, cat)


def test_unknown_id():
    with pytest.raises(UnknownLabel):
        build_side("m99", "lhs", 5)


@pytest.mark.parametrize("id", ["m18-4", "m24t-5", "ft6", "ft1", "m24s-1", "m24s-m1", "m24t-m5"])
def test_combination_recipes(id):
    assert get_record(id).recipe_kind == "combination"
    assert recipe_check(id, 80).passed


@pytest.mark.parametrize("id", [r.id for r in default_catalog() if r.recipe_kind in CHECKABLE])
def test_every_recipe_route(id):
    r = recipe_check(id, 60)
    assert r.passed, str(r)


def test_specialisations_are_integral():
    for b in ("e^(pi*i/3)", "e^(2*pi*i/3)"):
        for c in ("1", "q^2"):
            lhs, rhs = specialize_qbailey(b, c, 60)
            assert lhs.is_integral() and lhs.first_difference(rhs) is None
    for a, b in (("e^(pi*i/3)", "e^(-pi*i/3)"), ("q^2*e^(2*pi*i/3)", "q^2*e^(-2*pi*i/3)")):
        lhs, rhs = specialize_qgauss(a, b, 60)
        assert lhs.is_integral() and lhs.first_difference(rhs) is None


def test_qbailey_matches_record_directly():
    lhs, rhs = specialize_qbailey("e^(pi*i/3)", "1", 80)
    assert lhs.first_difference(build_side("m24t-2", "lhs", 80)) is None
    assert rhs.first_difference(build_side("m24t-2", "rhs", 80)) is None


def test_unsupported_specialisations():
    with pytest.raises(UnsupportedSpecialization):
        specialize_qgauss("e^(pi*i/3)", "e^(pi*i/3)", 10)
    with pytest.raises(UnsupportedSpecialization):
        specialize_qgauss("e^(pi*i/3)", "e^(-2*pi*i/3)", 10)
    with pytest.raises(UnsupportedSpecialization):
        specialize_qgauss("e^(pi*i/4)", "e^(-pi*i/4)", 10)
    with pytest.raises(UnsupportedSpecialization):
        specialize_qbailey("e^(pi*i/3)", "2*q", 10)


def test_corrected_sum_and_printed_sum():
    rec = get_record("m24s-m2")
    assert rec.printed_lhs is not None
    rhs = build_side("m24s-m2", "rhs", 60)
    assert build_side("m24s-m2", "lhs", 60).first_difference(rhs) is None
    assert expand(rec.printed_lhs, 60).first_difference(rhs) == (2, 1, 3)
