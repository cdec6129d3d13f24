from fractions import Fraction

import pytest

from app.errors import SpecializationObstruction
from app.linalg import LinearSystem, canonical_basis, echelon, nullspace, span_intersection
from app.scalars import ONE, parse_scalar


def _system(rows, ncols):
    return LinearSystem.from_rows(
        [{c: parse_scalar(str(v)) for c, v in enumerate(row) if v != 0} for row in rows],
        [f"x{i + 1}" for i in range(ncols)],
    )


def test_nullspace_of_a_rank_one_system():
    space = nullspace(_system([[1, 1], [2, 2]], 2))
    assert space.dim == 1
    assert space.basis == ((ONE, -ONE),)
    assert space.leading == (0,)
    assert space.parameter_names() == ("x1",)


def test_nullspace_does_not_depend_on_column_order():
    sys_ = _system([[1, 2, 0, -1], [0, 1, 1, 1]], 4)
    a = nullspace(sys_)
    b = nullspace(sys_, column_order=[3, 1, 0, 2])
    assert a.basis == b.basis
    for vec in a.basis:
        assert all(v.is_zero for v in sys_.evaluate(vec))


def test_full_rank_has_trivial_kernel():
    assert nullspace(_system([[1, 0], [0, 3]], 2)).dim == 0


def test_symbolic_pivot_is_reported():
    # (alpha - 1)*x1 = 0 and x1 = x2 force x = 0 unless alpha = 1
    sys_ = _system([["alpha - 1", 0], [1, -1]], 2)
    space = nullspace(sys_)
    assert space.dim == 0
    assert [str(e) for e in space.exceptional] == ["alpha = 1"]
    skipped = nullspace(sys_, excluded={"alpha": [Fraction(1)]})
    assert skipped.exceptional == ()
    with pytest.raises(SpecializationObstruction):
        nullspace(_system([["alpha - 1", 0], [0, 1]], 2), strict=True)


def test_echelon_membership():
    ech = echelon([{0: ONE, 1: ONE}], 3)
    assert ech.rank == 1
    assert ech.contains([parse_scalar("2"), parse_scalar("2"), parse_scalar("0")])
    assert not ech.contains([ONE, ONE, ONE])


def test_canonical_basis_and_intersection():
    x, y = parse_scalar("1"), parse_scalar("0")
    basis, leading = canonical_basis([(x, x, y), (x, y, y)], 3)
    assert leading == (0, 1)
    a = nullspace(_system([[0, 0, 1]], 3))
    b = nullspace(_system([[1, -1, 0]], 3))
    common, _ = span_intersection(a, b)
    assert len(common) == 1
    assert common[0] == (ONE, ONE, y)


def test_symbolic_pivot_rows_are_monic():
    z = parse_scalar("0")
    a, _ = canonical_basis([(parse_scalar("3*alpha + 6"), parse_scalar("9"), z)], 3)
    b, _ = canonical_basis([(parse_scalar("-alpha - 2"), parse_scalar("-3"), z)], 3)
    assert a == b
    assert a[0] == (parse_scalar("alpha + 2"), parse_scalar("3"), z)
    assert [str(v) for v in a[0]] == ["alpha + 2", "3", "0"]
