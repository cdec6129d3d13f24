import pytest

from app.catalog import expected_results, get_pair, reference_pairs
from app.linear_invariants import InvariantKind, invariant_space
from app.matrices import ParametricMatrix
from app.regression import check_row, enumeration_model, family_in_space, paper_regression


def row(id_):
    return next(r for r in expected_results() if r.id == id_)


@pytest.mark.parametrize(
    "id_, status, detected",
    [
        ("two-dim-invariants:A2_2,A2_3:derivation", "match", False),
        ("two-dim-invariants:A2_2,A2_4:derivation", "match", False),
        ("two-dim-invariants:A2_2,A2_3:centroid", "garbled-in-paper", True),
        ("two-dim-invariants:A2_2,A2_4:quasi-centroid", "garbled-in-paper", True),
        ("two-dim-invariants:A2_2,A2_3:automorphism", "garbled-in-paper", True),
        ("two-dim-rota-baxter:A2_2,A2_3:rota-baxter", "match", False),
        ("two-dim-rota-baxter:A2_2,A2_4:rota-baxter", "match", False),
        ("three-dim-invariants:A3_1,A3_3:automorphism", "garbled-in-paper", False),
        ("three-dim-invariants:A3_1,A3_3:derivation", "match", False),
        ("four-dim-example:A4_1,A4_2:automorphism", "garbled-in-paper", True),
    ],
)
def test_row_statuses(id_, status, detected):
    rec = check_row(row(id_))
    assert rec.status == status
    assert rec.detected is detected


def test_linear_record_contents():
    rec = check_row(row("two-dim-invariants:A2_2,A2_3:centroid"))
    assert rec.expected["dim"] == 2
    assert rec.computed["dim"] == 1
    assert rec.computed["oracle"]["spans"] is True


def test_automorphism_grid_extras_are_reported():
    rec = check_row(row("two-dim-invariants:A2_2,A2_3:automorphism"))
    assert rec.computed["grid"]["solutions"] == 20
    assert rec.computed["grid"]["outside_family"] > 0
    assert rec.computed["side_conditions"] == ["theta2_2 != 0"]
    assert rec.status == "garbled-in-paper"
    assert "outside the listed families" in rec.note


def test_four_dim_derivation_row():
    rec = check_row(row("four-dim-example:A4_1,A4_2:derivation"))
    assert rec.computed["dim"] == 1
    assert rec.computed["general_element"][0][2][2] != "0"
    assert rec.status == "garbled-in-paper"


def test_cohomology_rows_never_mismatch():
    for r in expected_results():
        if r.kind == "cohomology" and r.pair.first_name.startswith("A2"):
            rec = check_row(r)
            assert rec.status in ("match", "garbled-in-paper")
            assert set(rec.computed) == {"mixed", "strict", "matching_modes"}


def test_family_in_space():
    space = invariant_space(get_pair("A2_2", "A2_3"), InvariantKind.DERIVATION)
    assert family_in_space(space, [ParametricMatrix.from_text([[0, 0], ["a", "b"]])])
    assert not family_in_space(space, [ParametricMatrix.from_text([["a", 0], [0, 0]])])
    assert not family_in_space(space, [ParametricMatrix.from_text([[0, 0], ["a^2", 0]])])


def test_enumeration_of_two_dim_pairs():
    model = enumeration_model(2)
    assert model.listed_and_compatible == []
    assert sorted(model.listed_not_compatible) == sorted(r.key for r in reference_pairs(2))
    assert all(a != b for a, b in (k.split(",") for k in model.compatible_not_listed))


def test_full_regression_has_no_internal_disagreement():
    report = paper_regression(pair_lists=False)
    assert report.exit_code == 0
    assert report.summary["mismatch"] == 0
    assert report.summary["records"] == len(expected_results())
    assert report.summary["unattributed-match"] + report.summary["garbled-in-paper"] > 0
    assert report.pair_lists == []
