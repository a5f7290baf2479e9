import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from app.errors import SessionError
from frontend.components.parser import parse_session
from frontend.components.session import SessionOptions, execute

CORPUS = sorted((Path(__file__).parent / "sessions").glob("*.lrh"))


def run(text, **options):
    return execute(parse_session(text), SessionOptions(**options))


def values(report):
    return {f"{e.query} {e.subject}": (e.verdict if e.kind == "check" else e.value) for e in report.entries}


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus_sessions_run_cleanly(path):
    report = execute(parse_session(path.read_bytes()))
    assert report.ok, report.failures
    assert report.entries


def test_ring_invariants():
    report = run("field QQ; ring A = local QQ[x,y]/(x*y); compute edim A; compute dim A; compute cdim A; compute eps2 A;")
    assert values(report) == {"edim A": 2, "dim A": 1, "cdim A": 1, "eps2 A": 1}
    eps2 = report.entries[3]
    assert eps2.caveats == ["verified_degree=6"]


def test_square_map_values():
    report = run(
        "field QQ; ring T = local QQ[t]; ring Y = local QQ[y]; map f : T -> Y = [y^2];"
        "compute rd f; compute flatness f; check basically_regular f; compute fiber f;"
    )
    got = values(report)
    assert got["rd f"] == 1
    assert got["flatness f"] == {"kind": "Unknown", "witness": None}
    assert got["basically_regular f"] is False
    assert got["fiber f"] == "QQ[y]/(y^2)"
    assert report.failures == ["basically_regular f"]
    assert not report.ok


def test_linearized_map_entry():
    report = run("field QQ; ring A = local QQ[x,y]; ring U = local QQ[u]; map f : A -> U = [u, u]; compute linearized f;")
    value = report.entries[0].value
    assert value["matrix"] == [["1", "1"]]
    assert (value["rank"], value["nullity"]) == (1, 1)


def test_unknown_dimension_is_reported_as_unknown():
    report = run("field QQ; ring A = local QQ[x,y,z]/(x^3 + y^3 + x*y*z, x^2 + y*z); compute dim A; check regular A;")
    dim, regular = report.entries
    assert dim.value is None and "unknown" in dim.caveats
    assert regular.verdict is None
    assert report.ok
    assert "dim A = Unknown" in report.to_text()


def test_dim_override_applies_to_later_queries():
    report = run(
        "field QQ; ring A = local QQ[x,y,z]/(x^3 + y^3 + x*y*z, x^2 + y*z);"
        "compute dim A; set dim_override A 1; compute dim A;"
    )
    assert [e.value for e in report.entries] == [None, 1]


def test_trunc_degree_option():
    report = run("field QQ; set trunc_degree 9; ring A = local QQ[x]; compute mu A;")
    assert report.entries[0].caveats == ["verified_degree=9"]
    assert report.options.trunc_degree == 9
    report = run("field QQ; ring A = local QQ[x]; compute mu A;", trunc_degree=4)
    assert report.options.trunc_degree == 4
    assert report.entries[0].caveats == ["verified_degree=4"]


def test_options_are_validated():
    with pytest.raises(ValidationError):
        SessionOptions(trunc_degree=1)
    with pytest.raises(SessionError):
        run("field QQ; set trunc_degree 1;")


def test_map_that_is_not_well_defined_reports_its_statement():
    text = "field QQ;\nring A = local QQ[x]/(x^2);\nring B = local QQ[y];\nmap f : A -> B = [y];\n"
    with pytest.raises(SessionError) as info:
        run(text)
    assert "NotWellDefinedAtDegree" in str(info.value)
    assert info.value.span.line == 4


def test_constant_relation_is_rejected():
    with pytest.raises(SessionError):
        run("field QQ; ring A = local QQ[x]/(x + 1);")


def test_field_mismatch():
    with pytest.raises(SessionError):
        run("field QQ; ring A = local GF(5)[x];")


def test_division_by_zero_in_prime_field():
    with pytest.raises(SessionError):
        run("field GF(5); ring A = local GF(5)[x]/(x/5);")


def test_exponent_cap():
    with pytest.raises(SessionError):
        run("field QQ; ring A = local QQ[x]/(x^100);")


def test_json_report_shape():
    report = run("field GF(3); ring A = local GF(3)[x]; compute edim A; check regular A;")
    data = json.loads(report.to_json())
    assert data["version"] == "1.0"
    assert data["options"] == {"field": "GF(3)", "trunc_degree": 6}
    assert data["entries"][0] == {"query": "edim", "subject": "A", "value": 1, "caveats": []}
    assert data["entries"][1] == {"query": "regular", "subject": "A", "verdict": True, "caveats": []}
    assert data["failures"] == []


def test_text_report_lists_failures():
    report = run("field QQ; ring A = local QQ[x]/(x^2); check regular A;")
    text = report.to_text()
    assert "regular A = false" in text
    assert "1 check(s) failed: regular A" in text


def test_quotient_and_induced_maps():
    report = run(
        "field QQ; ring T = local QQ[t]; ring Y = local QQ[y]; map f : T -> Y = [y^2];"
        "ideal I = (t) in T; quotient Q = T / I via p; induced fI = f mod I;"
        "compute rd p; compute rd fI; compute edim Q;"
    )
    assert values(report) == {"rd p": 1, "rd fI": 0, "edim Q": 0}


def test_diagram_queries():
    report = run(
        "field QQ; ring T = local QQ[t]; ring Y = local QQ[y]; ring Z = local QQ[z];"
        "map f : T -> Y = [y^2]; map c : Y -> Y = [y^3]; map g : Y -> Z = [z];"
        "diagram U = triangle(f, c); diagram V = triangle(f, c) anticlockwise; diagram W = triangle(f, g);"
        "ideal I = (t^2) in T;"
        "compute triangle_rd U; compute triangle_rd V; check basic_diagram W; compute base_change W I;"
    )
    assert [e.value if e.kind == "compute" else e.verdict for e in report.entries] == [1, -1, True, 0]


def test_non_commuting_square_is_an_error():
    with pytest.raises(SessionError) as info:
        run(
            "field QQ; ring T = local QQ[t]; ring Y = local QQ[y];"
            "map f : T -> Y = [y^2]; map g : T -> Y = [y^3]; map i : Y -> Y = [y];"
            "diagram S = square(f, i, g, i);"
        )
    assert "NonCommutative" in str(info.value)
