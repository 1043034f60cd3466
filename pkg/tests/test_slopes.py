from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lspace.fixtures import probe_points
from lspace.slopes import (
    INF,
    IDENTITY,
    ZERO,
    Arc,
    Empty,
    FullCircle,
    IntMatrix2,
    LongitudeComplement,
    Point,
    Slope,
    as_slope,
    closed_arc,
    contains,
    covers_circle,
    format_slope,
    frac,
    interval_complement,
    interval_interior,
    is_subset,
    lft_apply,
    map_interval,
    parse_slope,
    residue,
)
from strategies import finite_fractions, intervals, slopes, unimodular

S = parse_slope


# ---------------------------------------------------------------------------
# Slopes


def test_slope_normalizes_sign_and_gcd():
    assert Slope(4, -6) == Slope(-2, 3)
    assert Slope(-5, 0) == INF
    assert Slope(0, 7) == ZERO


def test_zero_over_zero_rejected():
    with pytest.raises(ValueError):
        Slope(0, 0)


@pytest.mark.parametrize("text", ["3/4", "-7", "inf", "0", "12/5"])
def test_parse_format_round_trip(text):
    assert format_slope(parse_slope(text)) == text


@pytest.mark.parametrize("text", ["3/0x", "", "1/2/3", "a", "1.5"])
def test_malformed_slopes_rejected(text):
    with pytest.raises(ValueError):
        parse_slope(text)


@given(slopes)
def test_format_parse_inverse(s):
    assert parse_slope(format_slope(s)) == s


@settings(max_examples=10_000)
@given(finite_fractions)
def test_floor_and_fractional_part(x):
    assert math.floor(x) + frac(x) == x
    assert math.ceil(x) - frac(-x) == x
    assert 0 <= frac(x) < 1


@given(st.integers(-10**6, 10**6), st.integers(-500, 500).filter(bool))
def test_residue(a, b):
    r = residue(a, b)
    assert 0 <= r < abs(b)
    assert (a - r) % abs(b) == 0
    assert r == a - abs(b) * math.floor(Fraction(a, abs(b)))


# ---------------------------------------------------------------------------
# Linear fractional maps


def test_smooth_splice_matrix_examples():
    m = IntMatrix2(2, -1, 3, -2)
    assert lft_apply(m, INF) == S("2/3")
    assert lft_apply(m, S("2/3")) == INF
    assert lft_apply(IDENTITY, S("5/7")) == S("5/7")


def test_non_unimodular_matrix_rejected():
    with pytest.raises(ValueError):
        IntMatrix2(2, 0, 0, 2)


@given(unimodular(), slopes)
def test_inverse_undoes_map(m, s):
    assert m.inverse()(m(s)) == s
    assert (m @ m.inverse()) == IDENTITY


@given(unimodular(), unimodular(), slopes)
def test_composition_is_matrix_product(m1, m2, s):
    assert (m1 @ m2)(s) == m1(m2(s))


# ---------------------------------------------------------------------------
# Intervals: worked cases


def test_interior_cases():
    assert interval_interior(Point(S("3/2"))) == Empty()
    assert interval_interior(LongitudeComplement(ZERO)) == LongitudeComplement(ZERO)
    assert interval_interior(Arc(S("1/2"), S("3/5"))) == Arc(S("1/2"), S("3/5"), False, False)


def test_complement_cases():
    assert interval_complement(Arc(S("41"), S("46"), True, False)) == Arc(S("46"), S("41"), True, False)
    assert interval_complement(LongitudeComplement(S("1/2"))) == Point(S("1/2"))
    assert interval_complement(Empty()) == FullCircle()


def test_cover_cases():
    assert covers_circle(LongitudeComplement(S("1/3")), Point(S("1/3")))
    assert not covers_circle(Arc(ZERO, S("1"), False, False), Arc(S("1"), ZERO, False, False))
    assert covers_circle(FullCircle(), Empty())


def test_contains_cases():
    wrap = Arc(ZERO, S("-1"))
    assert wrap.wraps
    assert contains(wrap, INF)
    assert not contains(wrap, S("-1/2"))
    assert contains(Point(S("1/2")), S("1/2"))
    assert not contains(LongitudeComplement(S("1/2")), S("1/2"))


def test_degenerate_arc_rejected():
    with pytest.raises(ValueError):
        Arc(S("1"), S("1"))
    assert closed_arc("2", "2") == LongitudeComplement(S("2"))


def test_orientation_reversing_map_swaps_endpoints():
    m = IntMatrix2(6, 1, 1, 0)  # det -1
    assert map_interval(m, Arc(ZERO, S("-1/5"))) == Arc(S("1"), INF)


# ---------------------------------------------------------------------------
# Intervals: laws checked pointwise against exact probe points
# (the acceptance suite repeats these on 10^4 seeded random pairs)


@settings(max_examples=2_000, deadline=None)
@given(intervals)
def test_complement_is_involution_and_pointwise(i):
    c = interval_complement(i)
    assert interval_complement(c) == i
    for x in probe_points(i):
        assert contains(c, x) != contains(i, x)
    assert covers_circle(i, c)


@settings(max_examples=2_000, deadline=None)
@given(intervals, intervals)
def test_cover_and_subset_match_probe_points(a, b):
    pts = probe_points(a, b)
    assert covers_circle(a, b) == all(contains(a, x) or contains(b, x) for x in pts)
    assert is_subset(a, b) == all(contains(b, x) for x in pts if contains(a, x))
    assert covers_circle(a, b) == covers_circle(b, a)


@settings(max_examples=2_000, deadline=None)
@given(intervals, unimodular())
def test_map_interval_is_pointwise(i, m):
    img = map_interval(m, i)
    for x in probe_points(i):
        assert contains(img, m(x)) == contains(i, x)


@given(intervals)
def test_interior_is_open_subset(i):
    inner = interval_interior(i)
    assert is_subset(inner, i)
    for x in probe_points(i):
        if contains(inner, x):
            assert contains(i, x)


def test_as_slope_accepts_common_inputs():
    assert as_slope(3) == S("3")
    assert as_slope(Fraction(-1, 2)) == S("-1/2")
    assert as_slope("inf") == INF
    with pytest.raises(TypeError):
        as_slope(True)
