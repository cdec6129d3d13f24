from fractions import Fraction

import pytest

from app.errors import InvalidArgument, SingularTransform
from app.matrices import ParametricMatrix, as_matrix, determinant, identity, inverse, matmul
from app.scalars import parse_scalar


def test_determinant_and_inverse():
    m = as_matrix([[2, 1, 0], [0, 1, 0], [1, 0, 1]])
    assert determinant(m) == 2
    assert matmul(m, inverse(m)) == identity(3)
    assert determinant(as_matrix([["a", "b"], ["c", "d"]])) == parse_scalar("a*d - b*c")


def test_inverse_needs_a_nonzero_constant_determinant():
    with pytest.raises(SingularTransform):
        inverse(as_matrix([[1, 1], [1, 1]]))


def test_family_specialise_and_value():
    fam = ParametricMatrix.from_text([["t", 0], [0, "t^2"]], denominator="t")
    assert fam.parameters() == ("t",)
    assert fam.forced_zero_positions() == [(0, 1), (1, 0)]
    assert fam.specialize({"t": 2}).value() == as_matrix([[1, 0], [0, 2]])


def test_family_generators():
    fam = ParametricMatrix.from_text([["a", "b"], [0, "a - b"]])
    assert fam.is_homogeneous_linear()
    gens = fam.generators()
    assert gens["a"] == as_matrix([[1, 0], [0, 1]])
    assert gens["b"] == as_matrix([[0, 1], [0, -1]])
    assert not ParametricMatrix.from_text([[1, 0], [0, "t"]]).is_homogeneous_linear()


def test_match_finds_parameter_values():
    fam = ParametricMatrix.from_text([[1, 0], [0, "t"]])
    assert fam.match(as_matrix([[1, 0], [0, 2]])) == {"t": Fraction(2)}
    assert fam.match(as_matrix([[2, 0], [0, 2]])) is None


def test_match_respects_the_denominator():
    fam = ParametricMatrix.from_text(
        [["R2_1*R2_2", "R2_2^2"], ["-R2_1^2", "-R2_1*R2_2"]], denominator="R2_2"
    )
    assert fam.match(as_matrix([[1, 1], [-1, -1]])) is not None
    # the zero matrix would need R2_2 = 0
    assert fam.match(as_matrix([[0, 0], [0, 0]])) is None


def test_zero_denominator_is_rejected():
    with pytest.raises(InvalidArgument):
        ParametricMatrix.from_text([[1]], denominator="0")
