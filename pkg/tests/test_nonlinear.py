import pytest

from app.catalog import get_pair, reference_pairs
from app.errors import DimensionMismatch, InvalidArgument, LimitExceeded, UnknownInvariant
from app.matrices import ParametricMatrix, identity, zeros
from app.nonlinear import (
    ALL_IDENTITIES,
    IdentityTag,
    OperatorIdentity,
    Variant,
    grid_solve,
    refute_sample,
    residuals,
    spot_check,
    verify_family,
)

RB = OperatorIdentity(IdentityTag.ROTA_BAXTER)
AUT = OperatorIdentity(IdentityTag.AUTOMORPHISM)


def test_parse_and_labels():
    assert OperatorIdentity.parse("nijenhuis", "standard").label == "nijenhuis/standard"
    assert OperatorIdentity.parse("averaging").label == "averaging"
    with pytest.raises(UnknownInvariant):
        OperatorIdentity.parse("lie")
    assert len(ALL_IDENTITIES) == 7


def test_rota_baxter_residual_of_the_identity():
    res = residuals(get_pair("A2_2", "A2_3"), RB, ParametricMatrix(identity(2)))
    assert res.value(0, 0, 0, 0) == -1
    assert not res.all_zero


def test_identity_is_nijenhuis_in_both_variants():
    pair = get_pair("A2_2", "A2_3")
    for variant in Variant:
        ident = OperatorIdentity(IdentityTag.NIJENHUIS, variant)
        assert verify_family(pair, ident, ParametricMatrix(identity(2))).verified


def test_zero_map_passes_every_operator_identity():
    for ref in reference_pairs(2) + reference_pairs(3)[:5]:
        pair = ref.pair()
        for ident in ALL_IDENTITIES:
            if ident.tag is IdentityTag.AUTOMORPHISM:
                continue
            assert residuals(pair, ident, ParametricMatrix(zeros(pair.dim))).all_zero, (ref.key, ident.label)


def test_automorphism_family_with_side_condition():
    fam = ParametricMatrix.from_text([[1, 0], [0, "theta2_2"]])
    verdict = verify_family(get_pair("A2_2", "A2_3"), AUT, fam)
    assert verdict.verified
    assert [str(c) for c in verdict.side_conditions] == ["theta2_2 != 0"]
    singular = verify_family(get_pair("A2_2", "A2_3"), AUT, ParametricMatrix(zeros(2)))
    assert not singular.verified


def test_rota_baxter_families():
    pair = get_pair("A2_2", "A2_3")
    first = ParametricMatrix.from_text(
        [["R2_1*R2_2", "R2_2^2"], ["-R2_1^2", "-R2_1*R2_2"]], denominator="R2_2"
    )
    verdict = verify_family(pair, RB, first)
    assert verdict.verified
    assert [c.source for c in verdict.side_conditions] == ["denominator"]
    second = ParametricMatrix.from_text([[0, 0], ["R2_1", 0]])
    assert verify_family(pair, RB, second).verified
    assert verify_family(get_pair("A2_2", "A2_4"), RB, second).verified
    assert spot_check(pair, RB, first, samples=10, seed=3) == 0


def test_wrong_family_fails():
    fam = ParametricMatrix.from_text([["t", 0], [0, 0]])
    verdict = verify_family(get_pair("A2_2", "A2_4"), RB, fam)
    assert not verdict.verified
    assert verdict.failing


def test_dimension_check():
    with pytest.raises(DimensionMismatch):
        residuals(get_pair("A2_2", "A2_3"), RB, ParametricMatrix(identity(3)))


def test_rota_baxter_grid_is_the_printed_family():
    pair = get_pair("A2_2", "A2_4")
    sols = grid_solve(pair, RB, 2)
    assert set(sols) == {((0, 0), (b, 0)) for b in range(-2, 3)}
    assert len(grid_solve(pair, RB, 1)) == 3


def test_automorphism_grid():
    pair = get_pair("A2_2", "A2_3")
    expected = {((1, 0), (b, f)) for b in range(-2, 3) for f in (-2, -1, 1, 2)}
    assert set(grid_solve(pair, AUT, 2)) == expected
    assert len(grid_solve(pair, AUT, 1)) == 6


def test_grid_results_do_not_depend_on_workers():
    pair = get_pair("A2_2", "A2_3")
    assert grid_solve(pair, AUT, 2, workers=1) == grid_solve(pair, AUT, 2, workers=3)


def test_grid_limits():
    with pytest.raises(LimitExceeded):
        grid_solve(get_pair("A2_2", "A2_3"), RB, 3)
    with pytest.raises(LimitExceeded):
        grid_solve(get_pair("A4_1", "A4_2"), RB, 1)


def test_refutation_sampling():
    pair = get_pair("A2_2", "A2_4")
    fam = ParametricMatrix.from_text([[0, 0], ["R2_1", 0]])
    report = refute_sample(pair, RB, fam, trials=50, seed=11)
    assert report.failed == 50
    assert report.unexpected == ()
    assert report.fraction_failed == 1.0
    assert refute_sample(pair, RB, fam, trials=50, seed=11) == report
    with pytest.raises(InvalidArgument):
        refute_sample(pair, RB, fam, trials=0)
    full = ParametricMatrix.from_text([["a", "b"], ["c", "d"]])
    assert refute_sample(pair, RB, full, trials=5).skipped is not None


def test_printed_four_dim_automorphisms_fail():
    fam = ParametricMatrix.from_text(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], ["theta4_1", "-theta4_1", 0, 1]]
    )
    assert not verify_family(get_pair("A4_1", "A4_2"), AUT, fam).verified
    assert verify_family(get_pair("A4_1", "A4_2"), AUT, ParametricMatrix(identity(4))).verified
