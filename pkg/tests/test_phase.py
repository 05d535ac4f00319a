import math
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from oneway import phase as ph

fractions = st.fractions(min_value=-8, max_value=8, max_denominator=16)


def test_normalize_exact_wraps_into_range():
    assert ph.normalize(Fraction(-1, 2)) == Fraction(3, 2)
    assert ph.normalize(Fraction(5, 2)) == Fraction(1, 2)
    assert ph.normalize(4) == 0


def test_float_contaminates():
    p = ph.add(Fraction(1, 2), 0.25)
    assert isinstance(p, float)
    assert math.isclose(p, math.pi / 2 + 0.25)


def test_clifford_predicates_need_exact_values():
    assert ph.is_pauli(Fraction(1))
    assert ph.is_proper_clifford(Fraction(3, 2))
    assert not ph.is_clifford(Fraction(1, 4))
    assert not ph.is_clifford(math.pi / 2)
    assert not ph.is_zero(0.0)


def test_fmt():
    assert ph.fmt(Fraction(0)) == "0"
    assert ph.fmt(Fraction(1)) == "π"
    assert ph.fmt(Fraction(3, 4)) == "3π/4"


@given(fractions, fractions)
def test_add_neg_exact(p, q):
    s = ph.add(ph.normalize(p), ph.normalize(q))
    assert 0 <= s < 2
    assert ph.add(s, ph.neg(ph.normalize(q))) == ph.normalize(p)


@given(st.one_of(fractions, st.floats(min_value=-20, max_value=20)))
def test_json_round_trip(p):
    p = ph.normalize(p)
    back = ph.from_json(ph.to_json(p))
    assert type(back) is type(p)
    assert ph.approx_equal(back, p, 1e-12)


def test_json_none():
    assert ph.from_json(ph.to_json(None)) is None
