import json

from app.algebra import Algebra, StructureTensor
from app.catalog import get_algebra
from app.documents import print_document
from app.main import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_version(capsys):
    code, out, _ = call(capsys, "--version")
    assert code == 0
    assert "0.1.0" in out


def test_check_single_algebra(capsys):
    code, out, _ = call(capsys, "check", "A2_2")
    assert code == 0
    assert json.loads(out)["associativity"]["empty"] is True


def test_check_pair(capsys):
    code, out, _ = call(capsys, "check", "A2_2,A2_4")
    assert code == 0
    payload = json.loads(out)
    assert payload["compatibility"]["kind"] == "compatibility"


def test_derivation_dimensions(capsys):
    code, out, _ = call(capsys, "invariants", "A2_2,A2_3", "--kind", "derivation")
    assert code == 0
    report = json.loads(out)
    assert [(x["kind"], x["dim"]) for x in report["invariants"]] == [("derivation", 2)]
    _, out, _ = call(capsys, "invariants", "A2_2,A2_4", "--kind", "derivation,centroid")
    dims = {x["kind"]: x["dim"] for x in json.loads(out)["invariants"]}
    assert dims == {"derivation": 1, "centroid": 1}


def test_reports_are_deterministic(capsys):
    _, first, _ = call(capsys, "invariants", "A2_2,A2_4", "--kind", "all")
    _, second, _ = call(capsys, "--workers", "3", "invariants", "A2_2,A2_4", "--kind", "all")
    assert first == second


def test_zero_pair_report(capsys):
    code, out, _ = call(capsys, "invariants", "Zero_2,Zero_2")
    assert code == 0
    report = json.loads(out)
    dims = {x["kind"]: x["dim"] for x in report["invariants"]}
    assert dims["derivation"] == 4
    assert dims["quasi-derivation"] == 8
    assert dims["generalized-derivation"] == 12
    assert all(x["zero_map_passes"] for x in report["identities"] if x["identity"] != "automorphism")
    assert {c["mode"]: c["dim_H2"] for c in report["cohomology"]} == {"mixed": 16, "strict": 16}


def test_cohomology_command(capsys):
    code, out, _ = call(capsys, "cohomology", "Zero_2,Zero_2", "--mode", "mixed")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"app", "version", "pair", "dim", "cohomology"}
    assert payload["cohomology"][0]["dim_Z2"] == 16


def test_unknown_kind(capsys):
    code, _, err = call(capsys, "invariants", "A2_2,A2_3", "--kind", "lie")
    assert code == 1
    assert err.startswith("error:")


def test_single_algebra_where_pair_needed(capsys):
    code, _, _ = call(capsys, "invariants", "A2_2")
    assert code == 1


def test_non_associative_document(capsys, tmp_path):
    bad = Algebra("bad", StructureTensor.from_products(2, [(0, 0, 1, 1), (1, 1, 0, 1)]))
    path = tmp_path / "bad.json"
    path.write_text(print_document(bad), encoding="utf-8")
    code, _, err = call(capsys, "check", str(path))
    assert code == 2
    assert "not associative" in err


def test_document_target(capsys, tmp_path):
    path = tmp_path / "a.json"
    path.write_text(print_document(get_algebra("A2_4").algebra), encoding="utf-8")
    code, out, _ = call(capsys, "check", str(path))
    assert code == 0
    assert json.loads(out)["algebra"] == "A2_4"


def test_catalog_dump(capsys):
    code, out, _ = call(capsys, "catalog", "dump")
    assert code == 0
    assert len(json.loads(out)) == 22
    _, out, _ = call(capsys, "catalog", "dump", "--dim", "2")
    assert [d["name"] for d in json.loads(out)] == ["A2_1", "A2_2", "A2_3", "A2_4", "Zero_2"]


def test_schema(capsys):
    code, out, _ = call(capsys, "schema")
    assert code == 0
    assert set(json.loads(out)) == {"PairReport", "RegressionReport"}


def test_search_witness(capsys):
    code, out, _ = call(capsys, "search-witness", "A2_2", "A2_2")
    assert code == 0
    payload = json.loads(out)
    assert payload["witness"] == [["1", "0"], ["0", "1"]]
    assert payload["verified"] is True
    code, _, _ = call(capsys, "search-witness", "A2_2", "A2_3", "--bound", "5")
    assert code == 1


def test_grid(capsys):
    code, out, _ = call(capsys, "grid", "A2_2,A2_4", "--identity", "rota-baxter", "--bound", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == 5
    assert ["0", "0"] in [m[0] for m in payload["solutions"]]


def test_verify_family(capsys):
    code, out, _ = call(
        capsys, "verify-family", "A2_2,A2_4", "--identity", "rota-baxter", "--entries", "0,0;R2_1,0"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["verified"] is True
    assert payload["refutation"]["failed"] == 50
    code, out, _ = call(
        capsys, "verify-family", "A2_2,A2_3", "--identity", "automorphism", "--entries", "1,0;0,t"
    )
    assert json.loads(out)["side_conditions"] == ["t != 0"]


def test_bad_entries(capsys):
    code, _, err = call(capsys, "verify-family", "A2_2,A2_4", "--identity", "rota-baxter", "--entries", "1,2;3")
    assert code == 1
    assert "square" in err


def test_stats_go_to_stderr(capsys):
    code, out, err = call(capsys, "--stats", "check", "A2_2")
    assert code == 0
    json.loads(out)
    assert err.strip().startswith("{")
