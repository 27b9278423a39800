import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from redgreen.errors import ParseError
from redgreen.phase import PI, ZERO, Color, Phase

fractions = st.builds(Fraction, st.integers(-200, 200), st.integers(1, 48))
phases = fractions.map(Phase)


def test_reduced_into_zero_two_pi():
    assert Phase(Fraction(5, 2)).multiple == Fraction(1, 2)
    assert Phase(Fraction(-1, 3)).multiple == Fraction(5, 3)
    assert Phase(Fraction(2)) == ZERO


@given(phases, phases)
def test_addition_matches_float_sum(a, b):
    s = a + b
    assert s.exact
    assert cmath.isclose(s.unit(), a.unit() * b.unit(), abs_tol=1e-12)


@given(phases)
def test_negation_cancels(a):
    assert (a + (-a)).is_zero()
    assert (a - a) == ZERO


@given(phases, phases, phases)
def test_addition_associative_and_commutative(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a


@given(fractions)
def test_fast_path_equals_constructor(f):
    p = Phase._ratio(f.numerator, f.denominator)
    assert p == Phase(f)
    assert hash(p) == hash(Phase(f))


def test_exact_units_at_quarter_turns():
    assert Phase(Fraction(1, 2)).unit() == 1j
    assert PI.unit() == -1
    assert Phase(Fraction(3, 2)).unit() == -1j


def test_congruence_exact_and_float():
    assert Phase(Fraction(1, 3)).congruent(Phase(Fraction(7, 3)))
    assert Phase.from_radians(math.pi).is_pi()
    assert Phase.from_radians(math.pi / 3).congruent(Phase(Fraction(1, 3)))
    assert not Phase.from_radians(1.0).congruent(ZERO)


def test_float_phase_mixes_with_exact():
    s = Phase.from_radians(0.25) + Phase(Fraction(1, 2))
    assert not s.exact
    assert math.isclose(s.radians, 0.25 + math.pi / 2)


@pytest.mark.parametrize("text,expected", [("1/3", Fraction(1, 3)), ("1", Fraction(1)), ("-1/2", Fraction(3, 2)), (" 0 ", 0)])
def test_parse(text, expected):
    assert Phase.parse(text).multiple == expected


@pytest.mark.parametrize("text", ["", "pi", "1/0", "rad:nan", "rad:x"])
def test_parse_rejects(text):
    with pytest.raises((ParseError, ValueError)):
        Phase.parse(text)


@given(phases)
def test_str_round_trip(p):
    assert Phase.parse(str(p)) == p


def test_radian_round_trip():
    p = Phase.from_radians(1.2345)
    assert Phase.parse(str(p)).congruent(p)


def test_colors():
    assert Color.Z.other is Color.X
    assert Color.parse("x") is Color.X
    with pytest.raises(ParseError):
        Color.parse("Y")
