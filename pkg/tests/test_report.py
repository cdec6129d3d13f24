import json

import jsonschema
import pytest

from app.catalog import expected_results, get_pair
from app.errors import SoundnessError, UnknownInvariant
from app.main import run
from app.regression import check_row
from app.report import ALL_NAMES, parse_names, run_report
from app.schemas import SCHEMA_PATH, RegressionReport, all_schemas, validate_report


def test_parse_names():
    assert parse_names(None) == ALL_NAMES
    assert parse_names("derivation, centroid,derivation") == ["derivation", "centroid"]
    assert parse_names("centroid,all") == ALL_NAMES
    with pytest.raises(UnknownInvariant):
        parse_names("derivation,lie")


def test_report_for_a_reference_pair():
    report = run_report(get_pair("A2_2", "A2_4"), "derivation,rota-baxter,cohomology", cohomology_mode="mixed")
    assert report.pair == "(A2_2, A2_4)"
    assert not report.compatibility.empty
    [der] = report.invariants
    assert der.dim == 1
    assert der.general_element == [[["0", "0"], ["0", "d2_2"]]]
    [rb] = report.identities
    assert rb.zero_map_passes
    assert (rb.grid_bound, rb.grid_solutions) == (2, 5)
    assert [c.mode for c in report.cohomology] == ["mixed"]
    assert report.warnings == []


def test_symbolic_pair_reports_parameters():
    report = run_report(get_pair("A3_2", "A3_4"), "centroid")
    assert report.parameters == ["alpha"]
    assert report.invariants[0].kind == "centroid"


def test_four_dim_identities_skip_the_grid():
    report = run_report(get_pair("A4_1", "A4_2"), "averaging")
    assert report.identities[0].skipped
    assert report.identities[0].grid_solutions is None


def test_reports_validate_against_the_committed_schema():
    committed = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
    for pair, names in ((get_pair("A2_2", "A2_3"), ALL_NAMES), (get_pair("A3_2", "A3_4"), "centroid,derivation")):
        report = run_report(pair, names, cohomology_mode="mixed")
        jsonschema.validate(instance=json.loads(report.model_dump_json()), schema=committed["PairReport"])
        validate_report(report)
    rows = [check_row(r) for r in expected_results()[:4]]
    jsonschema.validate(instance=json.loads(RegressionReport(records=rows).model_dump_json()),
                        schema=committed["RegressionReport"])


def test_schema_violations_are_soundness_errors(tmp_path, monkeypatch):
    committed = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
    payload = json.loads(run_report(get_pair("A2_2", "A2_4"), "derivation").model_dump_json())
    payload["invariants"][0]["dim"] = "one"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(instance=payload, schema=committed["PairReport"])
    committed["RegressionReport"]["properties"]["summary"]["additionalProperties"] = {"type": "string"}
    stale = tmp_path / "report.schema.json"
    stale.write_text(json.dumps(committed), encoding="utf-8")
    monkeypatch.setattr("app.schemas.SCHEMA_PATH", stale)
    with pytest.raises(SoundnessError) as info:
        validate_report(RegressionReport(records=[], summary={"records": 0}))
    assert "summary/records" in str(info.value)
    assert run(["schema", "--check"]) == 3


def test_committed_schema_matches_the_schema_command(capsys):
    committed = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
    assert committed == all_schemas()
    assert run(["schema", "--check"]) == 0
    assert json.loads(capsys.readouterr().out) == committed
