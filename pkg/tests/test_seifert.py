from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lspace.seifert import (
    FiberExteriorInput,
    PeriodCapExceeded,
    UnclassifiedStructureCase,
    classify_special_slope,
    extremum_minus,
    extremum_plus,
    fiber_exterior_interval,
    lambda_canonicalize,
    pstar_qstar,
    rational_longitude,
    y_minus_of_k,
    y_plus_of_k,
)
from lspace.slopes import INF, Arc, Empty, LongitudeComplement, Slope, as_slope, parse_slope

S = parse_slope


def inp(slopes, bis=()):
    return FiberExteriorInput.build([S(s) if isinstance(s, str) else s for s in slopes], bis)


# ---------------------------------------------------------------------------
# Independent oracle: plain enumeration of the k-th terms over one period


def _terms(slopes, bis, k, sign):
    """k-th term of the lower (sign=+1) or upper (sign=-1) endpoint formula."""
    ys = [s.fraction() for s in slopes]
    if sign > 0:
        ends = [i.hi.fraction() if isinstance(i, Arc) else i.longitude.fraction() for i in bis]
        tot = 1 + sum(math.floor(y * k) for y in ys) + sum(math.ceil(e * k) - 1 for e in ends)
        return Fraction(-tot, k)
    ends = [i.lo.fraction() if isinstance(i, Arc) else i.longitude.fraction() for i in bis]
    tot = -1 + sum(math.ceil(y * k) for y in ys) + sum(math.floor(e * k) + 1 for e in ends)
    return Fraction(-tot, k)


def brute_extrema(slopes, bis):
    ends = []
    for i in bis:
        ends += [i.lo, i.hi] if isinstance(i, Arc) else [i.longitude]
    period = math.lcm(1, *(s.den for s in (*slopes, *ends)))
    lim_minus = -sum(s.fraction() for s in slopes) - sum(
        (i.hi if isinstance(i, Arc) else i.longitude).fraction() for i in bis
    )
    lim_plus = -sum(s.fraction() for s in slopes) - sum(
        (i.lo if isinstance(i, Arc) else i.longitude).fraction() for i in bis
    )
    lo = max(_terms(slopes, bis, k, +1) for k in range(1, period + 1))
    hi = min(_terms(slopes, bis, k, -1) for k in range(1, period + 1))
    return (
        (lo, True) if lo >= lim_minus else (lim_minus, False),
        (hi, True) if hi <= lim_plus else (lim_plus, False),
    )


finite = st.fractions(min_value=-3, max_value=3, max_denominator=7).map(as_slope)


@st.composite
def finite_inputs(draw):
    slopes = draw(st.lists(finite, min_size=1, max_size=4))
    bis = []
    for _ in range(draw(st.integers(0, 2))):
        lo = draw(finite)
        hi = draw(finite)
        bis.append(LongitudeComplement(lo) if lo == hi else Arc(lo, hi))
    return slopes, bis


# ---------------------------------------------------------------------------
# Worked values


@pytest.mark.parametrize(
    "p,q,expected", [(2, 3, (2, 1)), (1, 7, (1, 0)), (1, -4, (1, 0)), (2, 23, (12, 1))]
)
def test_pstar_qstar(p, q, expected):
    ps, qs = pstar_qstar(p, q)
    assert (ps, qs) == expected
    assert p * ps - q * qs == 1 and 0 <= qs < p


def test_pstar_qstar_rejects_non_coprime():
    with pytest.raises(ValueError):
        pstar_qstar(4, 6)


def test_per_k_terms():
    assert y_minus_of_k(inp(["-1/2", "2/3"]), 1) == S("0")
    assert y_minus_of_k(inp(["inf"]), 3) == INF
    for k in (1, 2, 7):
        assert y_minus_of_k(inp(["0", "0", "0"]), k) == Slope(-1, k)
        assert y_plus_of_k(inp(["0", "0", "0"]), k) == Slope(1, k)


def test_trefoil_fiber_exterior():
    r = fiber_exterior_interval(inp(["-1/2", "2/3"]))
    assert r.interval == Arc(S("0"), S("-1/5"))
    assert r.interval.wraps
    assert (r.minus_attained, r.plus_attained, r.is_bc) == (True, True, False)
    assert (r.argmax_k, r.argmin_k) == (1, 5)


def test_incompressible_piece_example():
    r = fiber_exterior_interval(inp(["-1/2", "1/3"], [Arc(S("3/5"), S("1/2"))]))
    assert r.interval == Arc(S("0"), S("-1"))


def test_two_fiber_slopes_give_empty():
    assert fiber_exterior_interval(inp(["inf", "inf", "1/2"])).interval == Empty()


def test_one_fiber_slope_without_ordered_pieces():
    r = fiber_exterior_interval(inp(["inf", "1/3"], [Arc(S("1"), S("1/2"))]))
    assert r.interval == LongitudeComplement(INF)
    assert r.is_bc


def test_klein_bottle_bundle_gives_longitude_complement():
    # equal attained extrema without ordered pieces
    r = fiber_exterior_interval(inp(["-1/2", "-1/2", "-1"]))
    assert r.interval == LongitudeComplement(S("2"))
    assert not r.is_bc


def test_solid_torus_like_input_is_boundary_compressible():
    r = fiber_exterior_interval(inp(["-1/2", "0"]))
    assert r.is_bc and not r.minus_attained and not r.plus_attained
    assert r.interval == LongitudeComplement(S("1/2"))


def test_infinity_among_both_endpoint_kinds_is_unclassified():
    with pytest.raises(UnclassifiedStructureCase):
        fiber_exterior_interval(inp(["1/2"], [Arc(INF, S("1")), Arc(S("2"), INF)]))


def test_period_cap(monkeypatch):
    hard = inp(["-1/1009", "-1/1013", "1/2"])
    assert fiber_exterior_interval(hard).argmin_k == 1007
    monkeypatch.setenv("LSPACE_PERIOD_CAP", "50")
    with pytest.raises(PeriodCapExceeded):
        fiber_exterior_interval(hard)
    # short periods stay under the cap
    assert fiber_exterior_interval(inp(["-1/2", "2/3"])).interval == Arc(S("0"), S("-1/5"))


def test_rational_longitude():
    assert rational_longitude([S("-1/2"), S("2/3")]) == S("-1/6")
    assert rational_longitude([S("0")] * 3) == S("0")
    assert rational_longitude([S("1/3"), S("-1/3")]) == S("0")
    assert rational_longitude([S("1"), INF]) == INF


def test_special_slope_flags():
    f = classify_special_slope([INF, S("3/4")])
    assert (f.in_R, f.in_Z, f.in_R0) == (True, False, True)
    assert not classify_special_slope([INF, S("3/4"), S("1/2")]).in_R0
    assert not classify_special_slope([S("1"), S("2")]).in_R
    assert classify_special_slope([INF, INF, S("1")]).in_Z
    assert classify_special_slope([INF, S("5/7"), S("0")]).in_R0
    assert not classify_special_slope([INF, S("5/7"), S("0")], has_exceptional_fibers=True).in_R0


@pytest.mark.parametrize(
    "vec,rep,shift",
    [
        (["5/2", "-3/2"], ["1/2", "1/2"], (2, -2)),
        (["1", "-1"], ["0", "0"], (1, -1)),
        (["1/3", "2/3"], ["1/3", "2/3"], (0, 0)),
        (["7/3", "inf"], ["1/3", "inf"], (2, -2)),
        (["3/2", "1/2"], ["1/2", "3/2"], (1, -1)),
    ],
)
def test_lambda_canonicalize(vec, rep, shift):
    r, s = lambda_canonicalize([S(x) for x in vec])
    assert r == tuple(S(x) for x in rep)
    assert s == shift
    assert sum(s) == 0


# ---------------------------------------------------------------------------
# Properties


@settings(max_examples=400, deadline=None)
@given(finite_inputs())
def test_extrema_match_enumeration(data):
    slopes, bis = data
    x = FiberExteriorInput.build(slopes, bis)
    (lo, lo_att), (hi, hi_att) = brute_extrema(slopes, bis)
    ym, ma, _ = extremum_minus(x)
    yp, pa, _ = extremum_plus(x)
    assert (ym.fraction(), ma) == (lo, lo_att)
    assert (yp.fraction(), pa) == (hi, hi_att)


@settings(max_examples=400, deadline=None)
@given(finite_inputs())
def test_attainment_dichotomy(data):
    slopes, bis = data
    r = fiber_exterior_interval(FiberExteriorInput.build(slopes, bis))
    assert r.minus_attained == r.plus_attained
    if not r.minus_attained:
        assert r.is_bc
        assert r.y_minus == r.y_plus
        if not bis:
            assert r.y_minus == rational_longitude(slopes)


@settings(max_examples=400, deadline=None)
@given(finite_inputs())
def test_negation_swaps_endpoints(data):
    slopes, bis = data
    x = FiberExteriorInput.build(slopes, bis)
    r = fiber_exterior_interval(x)
    n = fiber_exterior_interval(x.negated())
    assert n.y_minus == -r.y_plus and n.y_plus == -r.y_minus
    assert n.is_bc == r.is_bc


@settings(max_examples=300, deadline=None)
@given(finite_inputs(), st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_lattice_shift_invariance(data, raw):
    slopes, bis = data
    shift = raw[: len(slopes)]
    shift[-1] -= sum(shift)
    moved = [as_slope(s.fraction() + d) for s, d in zip(slopes, shift)]
    a = fiber_exterior_interval(FiberExteriorInput.build(slopes, bis))
    b = fiber_exterior_interval(FiberExteriorInput.build(moved, bis))
    assert a.interval == b.interval and a.is_bc == b.is_bc


@given(st.lists(st.one_of(st.just(INF), finite), min_size=1, max_size=5))
def test_lambda_canonical_form_reconstructs_input(vec):
    rep, shift = lambda_canonicalize(vec)
    assert sum(shift) == 0
    for s, r, d in zip(vec, rep, shift):
        if s.is_inf:
            assert r.is_inf
        else:
            assert r.fraction() + d == s.fraction()
