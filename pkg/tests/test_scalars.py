from fractions import Fraction

import pytest

from app.errors import ScalarParseError
from app.scalars import ONE, ZERO, Poly, evaluate, is_identically_zero, parse_scalar, rational_roots, substitute


def test_canonical_text():
    assert str(parse_scalar("2*t^2 - 1/3")) == "2*t^2 - 1/3"
    assert str(parse_scalar("(a+b)^2")) == "a^2 + 2*a*b + b^2"
    assert str(parse_scalar("1/3*t")) == "1/3*t"
    assert str(parse_scalar("x - x")) == "0"


def test_text_round_trip_is_exact():
    for text in ["-R2_1^2", "alpha - 1", "3/4*x*y - 2", "d2_1 + d2_1", "-(t - 1)^3"]:
        p = parse_scalar(text)
        assert parse_scalar(str(p)) == p


def test_arithmetic_and_equality():
    t = Poly.var("t")
    assert (t + 1) * (t - 1) == t ** 2 - 1
    assert (t - t).is_zero
    assert parse_scalar("6/4") == Fraction(3, 2)
    assert Poly.const(0) == ZERO and ONE == 1
    assert hash(parse_scalar("x*y")) == hash(parse_scalar("y*x"))


def test_unary_minus_binds_to_factor():
    assert parse_scalar("-t^2") == -(Poly.var("t") ** 2)
    assert parse_scalar("2*-t") == Poly.var("t").scale(-2)


@pytest.mark.parametrize("text", ["", "   ", "1/0", "2*", "(t", "t^x", "3 $ 4"])
def test_parse_errors(text):
    with pytest.raises(ScalarParseError):
        parse_scalar(text)


def test_parse_error_carries_position():
    with pytest.raises(ScalarParseError) as info:
        parse_scalar("1 + 2/0")
    assert info.value.position == 6


def test_substitute_and_evaluate():
    p = parse_scalar("t^2 - 1")
    assert substitute(p, {"t": 1}).is_zero
    assert substitute(p, {"t": parse_scalar("s + 1")}) == parse_scalar("s^2 + 2*s")
    assert evaluate(parse_scalar("x*y - 1/2"), {"x": 2, "y": 3}) == Fraction(11, 2)


def test_rational_roots():
    roots, rest = rational_roots(parse_scalar("alpha^2 - alpha"))
    assert set(roots) == {("alpha", Fraction(0)), ("alpha", Fraction(1))}
    assert rest == []
    roots, _ = rational_roots(parse_scalar("alpha^2 - alpha"), {"alpha": [Fraction(1)]})
    assert roots == [("alpha", Fraction(0))]
    roots, rest = rational_roots(parse_scalar("alpha^2 + 1"))
    assert roots == [] and rest == [parse_scalar("alpha^2 + 1")]
    assert rational_roots(parse_scalar("2*alpha + 1"))[0] == [("alpha", Fraction(-1, 2))]


def test_cancellation_is_identically_zero():
    p = parse_scalar("(a + b)^2 - a^2 - 2*a*b - b^2")
    assert is_identically_zero(p)
    assert p == ZERO
    assert not is_identically_zero(parse_scalar("a - b"))
