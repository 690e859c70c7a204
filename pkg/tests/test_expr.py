import pytest
from hypothesis import given, settings

from freediv.expr import ParseError, parse
from freediv.pseries import Series, to_string

from strategies import series

XY = ["x", "y"]


def test_parse_basic():
    f = parse("x^3 - y^2", XY)
    assert f.terms == {(3, 0): 1, (0, 2): -1}


def test_parse_rationals_and_parentheses():
    f = parse("1/2*(x + y)^2 - 3/4", XY)
    assert f.coeff((1, 1)) == 1
    assert f.coeff((0, 0)) == parse("-3/4", XY).constant_term()


def test_error_offsets_are_bytes():
    with pytest.raises(ParseError) as exc:
        parse("x + é", XY)
    assert exc.value.offset == 4
    with pytest.raises(ParseError) as exc:
        parse("x + + ", XY)
    assert exc.value.offset == 4


def test_unknown_variable():
    with pytest.raises(ParseError):
        parse("x + z", XY)


@settings(max_examples=200)
@given(series())
def test_round_trip(s):
    text = to_string(s, XY)
    assert parse(text, XY, s.prec) == s
