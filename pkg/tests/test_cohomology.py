import pytest

from app.catalog import get_pair, reference_pairs
from app.cohomology import (
    CohomologyMode,
    coboundary_space,
    cochain_labels,
    cocycle_space,
    cocycle_system,
    second_cohomology,
)


def test_labels_follow_the_coordinate_order():
    labels = cochain_labels(2)
    assert len(labels) == 16
    assert labels[:3] == ("g1_11", "g2_11", "g1_12")
    assert labels[8] == "h1_11"


def test_zero_pair():
    res = second_cohomology(get_pair("Zero_2", "Zero_2"))
    assert (res.dim_Z2, res.dim_B2, res.dim_H2) == (16, 0, 16)
    assert res.coboundaries_are_cocycles
    assert len(res.generator_labels) == 16


@pytest.mark.parametrize("ref", reference_pairs(2), ids=lambda r: r.key)
def test_two_dim_coboundaries(ref):
    assert coboundary_space(ref.pair()).dim == 4


@pytest.mark.parametrize("mode", list(CohomologyMode))
@pytest.mark.parametrize("ref", reference_pairs(2) + reference_pairs(3)[:3], ids=lambda r: getattr(r, "key", r))
def test_dimension_bookkeeping(ref, mode):
    res = second_cohomology(ref.pair(), mode)
    assert res.dim_H2 == res.dim_Z2 - res.dim_B2_in_Z2
    assert len(res.generator_labels) == len(res.representatives) == res.dim_H2
    assert res.dim_B2_in_Z2 <= min(res.dim_B2, res.dim_Z2)
    assert res.order_independent


def test_strict_cocycles_are_mixed_cocycles():
    pair = get_pair("A2_2", "A2_3")
    strict = cocycle_space(pair, CohomologyMode.STRICT)
    mixed = cocycle_space(pair, CohomologyMode.MIXED)
    assert strict.dim <= mixed.dim
    assert all(mixed.contains(v) for v in strict.basis)
    assert cocycle_system(pair, CohomologyMode.STRICT).shape[0] == 3 * 16


@pytest.mark.parametrize("name", ["A2_1", "A2_2", "A2_4", "A3_3", "A3_10"])
@pytest.mark.parametrize("mode", list(CohomologyMode))
def test_diagonal_pairs_have_coboundaries_inside_cocycles(name, mode):
    res = second_cohomology(get_pair(name, name), mode)
    assert res.coboundaries_are_cocycles
    assert res.dim_B2_in_Z2 == res.dim_B2


def test_coboundaries_satisfy_the_cocycle_system():
    pair = get_pair("A2_4", "A2_4")
    system = cocycle_system(pair)
    for vec in coboundary_space(pair).basis:
        assert all(v.is_zero for v in system.evaluate(vec))
