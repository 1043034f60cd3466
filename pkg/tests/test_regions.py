from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lspace.fixtures import NAMED_TREES, random_assignment, random_slope, random_tree, torus_tree
from lspace.regions import (
    HypothesisError,
    NoClosedForm,
    TorusSatelliteSpec,
    grid_values,
    inner_min_regions,
    lo_ctf_regions,
    monotone_at,
    monotone_stratum_member,
    n_pq,
    psi,
    psi_inv,
    raster_region,
    sample_inner_region,
    topology_classify,
    torus_lspace_s3,
    torus_lspace_sf,
    torus_region_label,
)
from lspace.satellite import (
    asymptotes,
    is_lspace_filling,
    root_splice_matrix,
    splice_matrix,
    vertex_interval,
)
from lspace.seifert import PeriodCapExceeded, UnclassifiedStructureCase
from lspace.slopes import INF, as_slope, contains, interval_interior, parse_slope

S = parse_slope
FIG1 = TorusSatelliteSpec(5, 2, 23, 2)
seeds = st.integers(0, 2**32 - 1)


def s3(*xs):
    return [S(str(x)) for x in xs]


# ---------------------------------------------------------------------------
# Basis change and the torus-link spec


def test_psi_examples():
    assert psi(INF, 46) == S("46")
    assert psi(S("1"), 46) == S("47")
    assert psi(S("-1"), 46) == S("45")
    assert psi(S("-1/6"), 6) == S("0")
    assert psi_inv(S("46"), 46) == INF


@given(st.integers(-50, 50).filter(bool), st.fractions(max_denominator=30).map(as_slope))
def test_psi_round_trip(pq, y):
    assert psi_inv(psi(y, pq), pq) == y


@pytest.mark.parametrize(
    "spec,value", [((5, 2, 23, 2), 41), ((0, 2, 3, 2), 1), ((2, 1, 7, 2), 3), ((3, 1, 2, 2), 5)]
)
def test_n_pq(spec, value):
    assert n_pq(TorusSatelliteSpec(*spec)) == value


def test_n_pq_for_p1_is_companion_bound():
    for g in range(1, 5):
        for q in (2, 5, -3):
            assert n_pq(TorusSatelliteSpec(g, 1, q, 2)) == 2 * g - 1


def test_spec_validation():
    for bad in ((0, 2, 4, 1), (1, 0, 3, 1), (1, 2, 0, 1), (-1, 2, 3, 1), (1, 2, 3, 0)):
        with pytest.raises(ValueError):
            TorusSatelliteSpec(*bad)


# ---------------------------------------------------------------------------
# Closed-form labels


@pytest.mark.parametrize(
    "alpha,lspace,flags",
    [
        ((46, 10), True, "R LSTAR MONO"),
        ((92, 23), False, "B"),
        ((47, 47), True, "LSTAR MONO"),
        ((46, 46), False, "R Z B"),
        ((41, 45), True, "LSTAR MONO"),
        ((40, 40), False, ""),
    ],
)
def test_torus_region_labels(alpha, lspace, flags):
    lab = torus_region_label(FIG1, s3(*alpha), with_monotone=True)
    assert lab.lspace is lspace
    assert lab.flags() == flags


def test_lower_and_upper_components():
    assert torus_region_label(FIG1, s3(41, 45)).in_L_minus
    assert torus_region_label(FIG1, s3(47, 47)).in_L_plus


def test_small_companion_labels_in_sf_basis():
    spec = TorusSatelliteSpec(2, 1, 2, 2)
    assert torus_region_label(spec, [S("1"), S("-1")], basis="sf").lspace
    assert not torus_region_label(spec, [S("1/2"), S("-1/2")], basis="sf").lspace
    with pytest.raises(ValueError):
        torus_region_label(spec, [S("1"), S("1")], basis="xyz")


@settings(max_examples=500, deadline=None)
@given(seeds)
def test_closed_forms_match_oracle(seed):
    rng = random.Random(seed)
    p = rng.randint(1, 4)
    q = rng.choice([x for x in range(-9, 10) if x and math.gcd(p, x) == 1])
    spec = TorusSatelliteSpec(rng.randint(0, 3), p, q, rng.randint(1, 3))
    y = [random_slope(rng) for _ in range(spec.n)]
    try:
        oracle = is_lspace_filling(spec.tree(), spec.assignment(y)).lspace
        sf = torus_lspace_sf(spec, y)
        s3_route = torus_lspace_s3(spec, spec.to_s3(y))
    except (NoClosedForm, UnclassifiedStructureCase, PeriodCapExceeded):
        return
    assert oracle == sf == s3_route


# ---------------------------------------------------------------------------
# Topology and LO / CTF regions


@pytest.mark.parametrize(
    "spec,case,retract",
    [
        ((5, 2, 3, 3), "i.a", "lattice Lambda"),
        ((2, 3, 8, 3), "i.a", "lattice Lambda"),
        ((5, 1, 8, 4), "i.b", "non-contractible"),
        ((5, 1, 8, 2), "i.c", "contractible"),
        ((5, 1, 9, 3), "i.c", "contractible"),
        ((5, 2, 23, 3), "ii", "torus T^2"),
        ((0, 2, 3, 3), "ii", "torus T^2"),
    ],
)
def test_topology_cases(spec, case, retract):
    rep = topology_classify(TorusSatelliteSpec(*spec))
    assert (rep.case_label, rep.retract) == (case, retract)


def test_topology_invariants():
    assert topology_classify(TorusSatelliteSpec(5, 1, 8, 4)).h1_rank == math.comb(4, 2) - 1
    assert topology_classify(TorusSatelliteSpec(5, 1, 8, 2)).dimension == 1
    assert topology_classify(TorusSatelliteSpec(5, 1, 9, 3)).dimension == 3
    with pytest.raises(HypothesisError):
        topology_classify(TorusSatelliteSpec(1, 2, -3, 2))


def test_lo_ctf_regions():
    reg = lo_ctf_regions(FIG1)
    assert reg.status == "lower-bound" and not reg.exact
    assert not reg.lo(s3(40, 40)) and not reg.ctf(s3(40, 40))
    assert reg.lo(s3(46, 46))
    assert lo_ctf_regions(TorusSatelliteSpec(5, 2, 3, 2)).status == "exact"
    assert lo_ctf_regions(TorusSatelliteSpec(2, 2, 5, 2)).status == "open"
    with pytest.raises(HypothesisError):
        lo_ctf_regions(TorusSatelliteSpec(0, 2, 3, 2))


def test_lo_regions_are_non_lspaces():
    reg = lo_ctf_regions(FIG1)
    for a in range(38, 50):
        for b in range(38, 50):
            alpha = s3(a, b)
            if reg.lo(alpha):
                assert not torus_region_label(FIG1, alpha).lspace
            if reg.ctf(alpha):
                assert reg.lo(alpha)


# ---------------------------------------------------------------------------
# Inner regions and the monotone stratum


def _monotone_by_preimages(t, v, a):
    """Same test as ``monotone_at``, pulling infinity back instead of pushing
    intervals forward."""
    st_ = vertex_interval(t, v, a)
    for e in t.incoming(v):
        if not contains(interval_interior(st_.children[e.j].interval), asymptotes(t, e)[1]):
            return False
    out = t.outgoing(v)
    m = splice_matrix(t, out) if out is not None else root_splice_matrix(t)
    return contains(interval_interior(st_.interval), m.inverse()(INF))


def test_inner_region_single_vertex():
    reg = inner_min_regions(torus_tree(0, 2, 3, 2))["v1"]
    assert (reg.m_plus, reg.m_minus) == (0, 0)


def test_inner_region_hypotheses():
    with pytest.raises(HypothesisError):
        inner_min_regions(NAMED_TREES["iterated_negative"], "algebraic")
    with pytest.raises(HypothesisError):
        inner_min_regions(NAMED_TREES["algebraic_exceptional"], "iterated")
    with pytest.raises(HypothesisError):
        inner_min_regions(torus_tree(5, 2, 3, 2))


@pytest.mark.parametrize("name", ["algebraic", "iterated_negative", "algebraic_trefoil"])
def test_inner_region_samples_are_monotone_lspaces(name):
    t = NAMED_TREES[name]
    regions = inner_min_regions(t)
    rng = random.Random(name)
    for _ in range(150):
        a = sample_inner_region(regions, rng)
        for v, reg in regions.items():
            assert reg.contains([a[(v, i)] for i in reg.slots])
        assert is_lspace_filling(t, a).lspace
        assert monotone_stratum_member(t, a)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_monotone_two_routes(seed):
    rng = random.Random(seed)
    t = random_tree(rng)
    a = random_assignment(rng, t)
    try:
        is_lspace_filling(t, a)
    except (UnclassifiedStructureCase, PeriodCapExceeded):
        return
    for v in t.vertices:
        assert monotone_at(t, v, a) == _monotone_by_preimages(t, v, a)


def test_monotone_stratum_is_proper():
    t = NAMED_TREES["iterated_negative"]
    a = {("r", 2): S("0"), ("c", 1): S("-3/5"), ("c", 2): S("7/5")}
    assert is_lspace_filling(t, a).lspace
    assert not monotone_stratum_member(t, a)


# ---------------------------------------------------------------------------
# Rasters


def test_grid_values():
    assert grid_values(Fraction(0), Fraction(1), Fraction(1, 3)) == [
        Fraction(0), Fraction(1, 3), Fraction(2, 3), Fraction(1)
    ]
    with pytest.raises(ValueError):
        grid_values(Fraction(0), Fraction(1), Fraction(0))
    with pytest.raises(ValueError):
        grid_values(Fraction(1), Fraction(0), Fraction(1))


def test_raster_modes_agree():
    t = NAMED_TREES["fig1"]
    free = (("v1", 1), ("v1", 2))
    win = (Fraction(40), Fraction(44), Fraction(40), Fraction(44))
    cells = raster_region(t, free, win, Fraction(1), mode="both")
    assert len(cells) == 25 and all(c.error is None for c in cells)
    closed = raster_region(t, free, win, Fraction(1), mode="closed")
    assert [c.label.lspace for c in cells] == [c.label.lspace for c in closed]
    assert (str(cells[0].a1), str(cells[0].a2), cells[0].label.lspace) == ("40", "40", False)
    assert cells[1].a2 == S("41") and cells[1].label.lspace


def test_raster_on_tree_with_pins():
    t = NAMED_TREES["algebraic"]
    win = (Fraction(-2), Fraction(2), Fraction(-2), Fraction(2))
    cells = raster_region(
        t, (("r", 2), ("c", 1)), win, Fraction(1), pins={("c", 2): S("1/2")}, basis="sf"
    )
    for c in cells:
        a = {("r", 2): c.a1, ("c", 1): c.a2, ("c", 2): S("1/2")}
        assert c.label.lspace == is_lspace_filling(t, a).lspace
    with pytest.raises(NoClosedForm):
        raster_region(t, (("r", 2), ("c", 1)), win, Fraction(1), pins={("c", 2): 0}, mode="closed")
    with pytest.raises(ValueError):
        raster_region(t, (("r", 2), ("c", 1)), win, Fraction(1))
