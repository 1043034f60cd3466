"""Closed-form L-space regions for torus-link satellites, inner
approximations for iterated and algebraic satellites, and rasters.

Slope vectors in the S^3 basis are related to the SF basis by
``alpha = pq + 1/y``.  The torus-link regions are computed twice: once
from the SF-basis endpoint formulas, and once as lattice orbits of the
S^3-basis fundamental sets.  The lattice ``Lambda`` is the set of integer
vectors summing to zero, acting by addition of SF slopes.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .satellite import (
    Assignment,
    CompanionKnot,
    Edge,
    SatelliteTree,
    Vertex,
    algebraicity_check,
    edge_delta,
    is_lspace_filling,
    root_splice_matrix,
    splice_matrix,
    vertex_interval,
    _require_valid,
    _vertex_interval,
)
from .seifert import PeriodCapExceeded, classify_special_slope, period_cap, pstar_qstar
from .slopes import (
    INF,
    Arc,
    IntMatrix2,
    Point,
    Slope,
    SlopeInterval,
    SlopeLike,
    as_slope,
    contains,
    interval_interior,
    lft_apply,
    map_interval,
    residue,
)

__all__ = [
    "NoClosedForm",
    "HypothesisError",
    "psi",
    "psi_inv",
    "psi_matrix",
    "TorusSatelliteSpec",
    "n_pq",
    "RegionLabel",
    "torus_lspace_sf",
    "torus_lspace_s3",
    "torus_in_B",
    "torus_region_label",
    "orbit_meets_box",
    "VertexInnerRegion",
    "inner_min_regions",
    "sample_inner_region",
    "monotone_at",
    "monotone_stratum_member",
    "TopologyReport",
    "topology_classify",
    "LoCtfRegions",
    "lo_ctf_regions",
    "RasterCell",
    "raster_region",
    "grid_values",
]


class NoClosedForm(ValueError):
    """No closed-form region is available for these parameters."""


class HypothesisError(ValueError):
    """The parameters violate the hypotheses of the requested region."""


# ---------------------------------------------------------------------------
# Basis change
# ---------------------------------------------------------------------------


def psi_matrix(pq: int) -> IntMatrix2:
    return IntMatrix2(pq, 1, 1, 0)


def psi(y: SlopeLike, pq: int) -> Slope:
    """SF slope to S^3 slope: ``pq + 1/y``."""
    return lft_apply(psi_matrix(pq), as_slope(y))


def psi_inv(alpha: SlopeLike, pq: int) -> Slope:
    """S^3 slope to SF slope: ``1/(alpha - pq)``."""
    return lft_apply(psi_matrix(pq).inverse(), as_slope(alpha))


# ---------------------------------------------------------------------------
# Torus-link satellites
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class TorusSatelliteSpec:
    """The ``T(np, nq)`` satellite of a genus-``genus`` positive L-space knot
    (the unknot when ``genus == 0``)."""

    genus: int
    p: int
    q: int
    n: int

    def __post_init__(self) -> None:
        if self.genus < 0 or self.p <= 0 or self.n <= 0 or self.q == 0:
            raise ValueError("need genus >= 0, p > 0, n > 0, q != 0")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError("p and q must be coprime")

    @property
    def N(self) -> int:
        return 2 * self.genus - 1

    @property
    def pq(self) -> int:
        return self.p * self.q

    @property
    def trivial(self) -> bool:
        return self.genus == 0

    @property
    def D(self) -> int:
        """``q - N p``, the denominator of the upper endpoint correction."""
        return self.q - self.N * self.p

    def tree(self) -> SatelliteTree:
        comp = (
            CompanionKnot("unknot")
            if self.trivial
            else CompanionKnot("lspace_knot", self.genus)
        )
        return SatelliteTree({"v1": Vertex("v1", self.p, self.q, self.n)}, "v1", (), comp)

    def to_sf(self, alpha: Sequence[SlopeLike]) -> tuple[Slope, ...]:
        return tuple(psi_inv(a, self.pq) for a in alpha)

    def to_s3(self, y: Sequence[SlopeLike]) -> tuple[Slope, ...]:
        return tuple(psi(s, self.pq) for s in y)

    def assignment(self, y: Sequence[SlopeLike]) -> dict[tuple[str, int], Slope]:
        if len(y) != self.n:
            raise ValueError(f"expected {self.n} slopes")
        return {("v1", i + 1): as_slope(s) for i, s in enumerate(y)}


def n_pq(spec: TorusSatelliteSpec) -> int:
    return spec.pq - spec.p - spec.q + 2 * spec.genus * spec.p


def _floor(s: Slope) -> int:
    return s.num // s.den


def _ceil(s: Slope) -> int:
    return -((-s.num) // s.den)


def _frac(s: Slope) -> Fraction:
    return Fraction(s.num % s.den, s.den)


def _unknot_unit_p(spec: TorusSatelliteSpec, y: Sequence[Slope]) -> bool:
    """``T(n, nq)`` with ``q > 0``: compare 0 with both endpoint searches."""
    q = spec.q
    shift = Fraction(1, q) + sum((s.fraction() for s in y), Fraction(0))
    period = q
    for s in y:
        period = math.lcm(period, s.den)
    cap = period_cap()

    def lower(k: int) -> int:
        return -1 - k // q - sum((s.num * k) // s.den for s in y)

    def upper(k: int) -> int:
        return 1 - (-(-k // q)) - sum(-((-s.num * k) // s.den) for s in y)

    def search(pred: Callable[[int], bool]) -> bool:
        if period > cap:
            raise PeriodCapExceeded(f"period {period} exceeds cap {cap}")
        return any(pred(k) for k in range(1, period + 1))

    # lower(k) drifts by -k*shift, upper(k) likewise; only one period matters
    # when the drift does not push them past zero.
    if shift == 0:
        # Euler number zero: positive first Betti number
        return False
    lower_pos = shift < 0 or search(lambda k: lower(k) > 0)
    upper_neg = shift > 0 or search(lambda k: upper(k) < 0)
    return not (lower_pos and upper_neg)


def torus_lspace_sf(spec: TorusSatelliteSpec, y: Sequence[SlopeLike]) -> bool:
    """L-space membership from the SF-basis endpoint formulas."""
    ys = tuple(as_slope(s) for s in y)
    if len(ys) != spec.n:
        raise ValueError(f"expected {spec.n} slopes")
    n_inf = sum(1 for s in ys if s.is_inf)
    if n_inf >= 2:
        return False
    if spec.trivial:
        if spec.q < 0:
            return torus_lspace_sf(TorusSatelliteSpec(0, spec.p, -spec.q, spec.n), [-s for s in ys])
        if spec.p == 1:
            return n_inf == 1 or _unknot_unit_p(spec, ys)
        if spec.q == 1:
            raise NoClosedForm("unknot companion with q = 1 and p > 1")
    elif Fraction(spec.N) > Fraction(spec.q, spec.p):
        if n_inf:
            return False
        if spec.p > 1:
            return all(s.den == 1 for s in ys) and sum(s.num for s in ys) == 0
        total = sum((s.fraction() for s in ys), Fraction(0))
        return sum(1 for s in ys if s.den != 1) <= 1 and 0 <= total <= Fraction(1, spec.N - spec.q)
    if n_inf == 1:
        return True
    y_minus = -sum(_floor(s) for s in ys)
    d = spec.D
    if d == 0:
        return not (y_minus > 0)
    y_plus = Fraction(-sum(_ceil(s) for s in ys))
    if sum(math.floor(_frac(-s) * d) for s in ys) == 0:
        y_plus -= Fraction(1, d)
    return not (y_plus < 0 < y_minus)


@dataclass(frozen=True, slots=True)
class _LinearBox:
    lo: Fraction | None
    hi: Fraction | None
    lo_closed: bool
    hi_closed: bool

    def contains(self, x: Fraction) -> bool:
        if self.lo is not None and (x < self.lo or (x == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (x > self.hi or (x == self.hi and not self.hi_closed)):
            return False
        return True

    def shifts(self, x: Fraction) -> tuple[int | None, int | None]:
        """Range of integers l with ``x + l`` inside."""
        lo = hi = None
        if self.lo is not None:
            d = self.lo - x
            lo = math.ceil(d) if self.lo_closed else math.floor(d) + 1
        if self.hi is not None:
            d = self.hi - x
            hi = math.floor(d) if self.hi_closed else math.ceil(d) - 1
        return lo, hi


def _to_box(i: SlopeInterval) -> _LinearBox:
    if isinstance(i, Point):
        v = i.slope.fraction()
        return _LinearBox(v, v, True, True)
    if not isinstance(i, Arc) or i.wraps:
        raise ValueError(f"{i} is not an interval of the line")
    lo = None if i.lo.is_inf else i.lo.fraction()
    hi = None if i.hi.is_inf else i.hi.fraction()
    return _LinearBox(lo, hi, i.lo_closed, i.hi_closed)


def orbit_meets_box(y: Sequence[Fraction], boxes: Sequence[_LinearBox]) -> bool:
    """Whether ``y + l`` lies in the product of ``boxes`` for some l in Lambda."""
    lo_sum = 0
    hi_sum = 0
    lo_inf = hi_inf = False
    for x, b in zip(y, boxes):
        lo, hi = b.shifts(x)
        if lo is not None and hi is not None and lo > hi:
            return False
        if lo is None:
            lo_inf = True
        else:
            lo_sum += lo
        if hi is None:
            hi_inf = True
        else:
            hi_sum += hi
    return (lo_inf or lo_sum <= 0) and (hi_inf or hi_sum >= 0)


def _s3_box(spec: TorusSatelliteSpec, arc: SlopeInterval) -> _LinearBox:
    return _to_box(map_interval(psi_matrix(spec.pq).inverse(), arc))


def _s3_fundamental_sets(spec: TorusSatelliteSpec) -> tuple[list[list[_LinearBox]], list[list[_LinearBox]]]:
    """Products of SF boxes whose unions are the minus and plus parts of the
    fundamental set (the plus part is empty in the small-N regime)."""
    n, pq = spec.n, spec.pq
    if not spec.trivial and Fraction(spec.N) > Fraction(spec.q, spec.p):
        zero = _to_box(Point(as_slope(0)))
        if spec.p > 1:
            return [[zero] * n], []
        seg = _s3_box(spec, Arc(as_slope(spec.N), INF))
        return [[seg if j == i else zero for j in range(n)] for i in range(n)], []
    if spec.trivial and not (spec.p > 1 and spec.q > 1):
        raise NoClosedForm("fundamental set needs p, q > 1 for the unknot")
    npq = n_pq(spec)
    whole = _s3_box(spec, Arc(INF, as_slope(pq), True, False))
    minus: list[list[_LinearBox]] = []
    if npq != pq:
        strip = _s3_box(spec, Arc(as_slope(npq), as_slope(pq), True, False))
        minus = [[strip if j == i else whole for j in range(n)] for i in range(n)]
    plus = [[_s3_box(spec, Arc(as_slope(pq), INF, False, True))] * n]
    return minus, plus


def torus_lspace_s3(spec: TorusSatelliteSpec, alpha: Sequence[SlopeLike]) -> bool:
    """L-space membership as a lattice orbit of the S^3 fundamental set."""
    y = spec.to_sf(alpha)
    n_inf = sum(1 for s in y if s.is_inf)
    if n_inf >= 2:
        return False
    small_n = not spec.trivial and Fraction(spec.N) > Fraction(spec.q, spec.p)
    if n_inf == 1:
        return not small_n
    fy = [s.fraction() for s in y]
    minus, plus = _s3_fundamental_sets(spec)
    return any(orbit_meets_box(fy, boxes) for boxes in (*minus, *plus))


def _raw_in(alpha_sf: Sequence[Slope], products: list[list[_LinearBox]]) -> bool:
    if any(s.is_inf for s in alpha_sf):
        return False
    fy = [s.fraction() for s in alpha_sf]
    return any(all(b.contains(x) for x, b in zip(fy, boxes)) for boxes in products)


def torus_in_B(spec: TorusSatelliteSpec, y: Sequence[SlopeLike]) -> bool:
    """Whether the filling has positive first Betti number."""
    ys = [as_slope(s) for s in y]
    n_inf = sum(1 for s in ys if s.is_inf)
    if n_inf >= 2:
        return True
    if n_inf == 1:
        return False
    return Fraction(1, spec.pq) + sum((s.fraction() for s in ys), Fraction(0)) == 0


@dataclass(frozen=True, slots=True)
class RegionLabel:
    lspace: bool
    in_R: bool
    in_Z: bool
    in_B: bool
    in_L_minus: bool | None
    in_L_plus: bool | None
    in_lambda_orbit_of_Lstar: bool | None
    monotone: bool | None = None
    in_Lstar: bool | None = None

    def flags(self) -> str:
        out = []
        if self.in_R:
            out.append("R")
        if self.in_Z:
            out.append("Z")
        if self.in_B:
            out.append("B")
        if self.in_Lstar:
            out.append("LSTAR")
        if self.monotone:
            out.append("MONO")
        return " ".join(out)


def torus_region_label(
    spec: TorusSatelliteSpec,
    alpha: Sequence[SlopeLike],
    *,
    basis: str = "s3",
    with_monotone: bool = False,
) -> RegionLabel:
    """Closed-form label for an S^3 (or SF) slope vector."""
    if basis == "s3":
        y = spec.to_sf(alpha)
    elif basis == "sf":
        y = tuple(as_slope(s) for s in alpha)
    else:
        raise ValueError(f"unknown basis {basis!r}")
    flags = classify_special_slope(y)
    lspace = torus_lspace_sf(spec, y)
    try:
        orbit = torus_lspace_s3(spec, spec.to_s3(y))
        minus, plus = _s3_fundamental_sets(spec)
        in_minus = _raw_in(y, minus)
        in_plus = _raw_in(y, plus)
        small_n = not spec.trivial and Fraction(spec.N) > Fraction(spec.q, spec.p)
        rz = flags.in_R and not flags.in_Z and not small_n
        in_lstar = in_minus or in_plus or rz
    except NoClosedForm:
        orbit = in_minus = in_plus = in_lstar = None
    mono = None
    if with_monotone:
        t = spec.tree()
        mono = monotone_stratum_member(t, spec.assignment(y))
    return RegionLabel(
        lspace, flags.in_R, flags.in_Z, torus_in_B(spec, y),
        in_minus, in_plus, orbit, mono, in_lstar,
    )


# ---------------------------------------------------------------------------
# Inner approximations
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class VertexInnerRegion:
    """Per-vertex factor ``L^min- u (R \\ Z) u L^min+`` over the slots I_v.

    ``excl_plus``/``excl_minus`` hold the modulus M of an excluded set
    ``{sum floor(y) = 0, sum floor([y] M) = 0}`` (respectively with ceilings
    and ``[-y]``), or ``None``.
    """

    vertex: str
    slots: tuple[int, ...]
    m_plus: int
    m_minus: int
    excl_plus: int | None = None
    excl_minus: int | None = None
    drop_minus: bool = False

    def in_min_plus(self, y: Sequence[Slope]) -> bool:
        if any(s.is_inf for s in y):
            return False
        tot = sum(_floor(s) for s in y)
        if tot < self.m_plus:
            return False
        if self.excl_plus is not None and tot == 0:
            if sum(math.floor(_frac(s) * self.excl_plus) for s in y) == 0:
                return False
        return True

    def in_min_minus(self, y: Sequence[Slope]) -> bool:
        if any(s.is_inf for s in y):
            return False
        tot = sum(_ceil(s) for s in y)
        if tot > self.m_minus:
            return False
        if self.excl_minus is not None and tot == 0:
            if sum(math.floor(_frac(-s) * self.excl_minus) for s in y) == 0:
                return False
        return True

    def in_r_minus_z(self, y: Sequence[Slope]) -> bool:
        return sum(1 for s in y if s.is_inf) == 1

    def contains(self, y: Sequence[SlopeLike]) -> bool:
        ys = [as_slope(s) for s in y]
        if self.drop_minus and self.in_min_minus(ys):
            return False
        return self.in_min_plus(ys) or self.in_r_minus_z(ys) or self.in_min_minus(ys)


def _ceil_frac(a: int, b: int) -> int:
    return -((-a) // b)


def inner_min_regions(
    t: SatelliteTree, variant: str | None = None, *, allow_special: bool = False
) -> dict[str, VertexInnerRegion]:
    """Per-vertex inner-approximation factors.

    ``variant`` is ``"algebraic"`` or ``"iterated"``; by default algebraic
    trees use the algebraic bounds and all others the iterated ones.
    """
    _require_valid(t)
    alg = algebraicity_check(t)
    has_exc = any(e.j == -1 for e in t.edges)
    if variant is None:
        variant = "algebraic" if alg.is_algebraic else "iterated"
    if variant == "algebraic" and not alg.is_algebraic:
        raise HypothesisError("tree is not algebraic")
    if variant == "iterated" and has_exc:
        raise HypothesisError("iterated bounds need smooth splices only")
    if variant not in ("algebraic", "iterated"):
        raise ValueError(f"unknown variant {variant!r}")

    r = t.vertices[t.root]
    special = False
    if not t.companion.is_unknot:
        if t.companion.kind != "lspace_knot":
            raise HypothesisError("companion must be the unknot or an L-space knot")
        big_n = 2 * t.companion.genus - 1
        ok = Fraction(r.q, r.p) >= big_n and r.q > big_n
        if not ok:
            if variant == "algebraic" and allow_special and r.p == 1 and r.q == big_n:
                special = True
            else:
                raise HypothesisError(
                    f"root (p, q) = ({r.p}, {r.q}) violates q/p >= N and q > N for N = {big_n}"
                )

    out: dict[str, VertexInnerRegion] = {}
    for vid, v in t.vertices.items():
        inc = t.incoming(vid)
        J = t.smooth_indices(vid)
        ev = t.outgoing(vid)
        ev_exc = ev is not None and ev.j == -1
        if variant == "algebraic":
            m_minus = 0
            for e in inc:
                if e.j != -1:
                    m_minus -= 1
                else:
                    c = t.vertices[e.src]
                    m_minus -= _ceil_frac(c.p, v.p * edge_delta(t, e)) + 1
            if ev_exc:
                assert ev is not None
                u = t.vertices[ev.dst]
                m_minus -= _ceil_frac(u.p, v.p * edge_delta(t, ev)) + 1
            elif J:
                m_minus -= 1
            excl_minus = v.q - v.p if (not J and not ev_exc) else None
            region = VertexInnerRegion(
                vid, t.free_indices(vid), 0, m_minus, None, excl_minus,
                drop_minus=special and vid == t.root,
            )
        else:
            m_plus = -sum(_ceil_frac(t.vertices[e.src].p, t.vertices[e.src].q) - 1 for e in inc)
            m_minus = -sum(t.vertices[e.src].p // t.vertices[e.src].q + 1 for e in inc)
            ratio = Fraction(v.p, v.q)
            if v.q == -1:
                m_plus += 2
            elif J and (v.q < -1 or ratio > 1):
                m_plus += 1
            if v.q == 1:
                m_minus -= 2
            elif J and (v.q > 1 or ratio < -1):
                m_minus -= 1
            excl_plus = excl_minus = None
            if not J:
                if ratio > 1:
                    excl_plus = residue(v.p, v.q)
                elif v.q < -1:
                    excl_plus = residue(-v.p, v.q)
                if ratio < -1:
                    excl_minus = residue(v.p, v.q)
                elif v.q > 1:
                    excl_minus = residue(-v.p, v.q)
            region = VertexInnerRegion(
                vid, t.free_indices(vid), m_plus, m_minus, excl_plus, excl_minus
            )
        out[vid] = region
    return out


def _random_rational(rng: random.Random, max_den: int) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randrange(0, den), den)


def sample_inner_region(
    regions: Mapping[str, VertexInnerRegion],
    rng: random.Random,
    *,
    max_den: int = 7,
    spread: int = 3,
) -> dict[tuple[str, int], Slope]:
    """Draw one slope assignment from the product of the per-vertex factors."""
    out: dict[tuple[str, int], Slope] = {}
    for vid in sorted(regions):
        reg = regions[vid]
        k = len(reg.slots)
        for _ in range(1000):
            kinds = ["plus", "minus"] + (["rz"] if k else [])
            kind = rng.choice(kinds)
            if kind == "rz":
                ys = [as_slope(_random_rational(rng, max_den) + rng.randint(-spread, spread)) for _ in range(k)]
                ys[rng.randrange(k)] = INF
            elif kind == "plus":
                fr = [_random_rational(rng, max_den) for _ in range(k)]
                ints = [rng.randint(-spread, spread) for _ in range(k)]
                if k:
                    ints[-1] += reg.m_plus + rng.randint(0, 2) - sum(ints)
                ys = [as_slope(f + i) for f, i in zip(fr, ints)]
            else:
                fr = [_random_rational(rng, max_den) for _ in range(k)]
                ints = [rng.randint(-spread, spread) for _ in range(k)]
                if k:
                    ints[-1] += reg.m_minus - rng.randint(0, 2) - sum(ints)
                ys = [as_slope(i - f) for f, i in zip(fr, ints)]
            if reg.contains(ys):
                break
        else:
            raise HypothesisError(f"could not sample vertex {vid}")
        for i, s in zip(reg.slots, ys):
            out[(vid, i)] = s
    return out


# ---------------------------------------------------------------------------
# Monotone stratum
# ---------------------------------------------------------------------------


def monotone_at(t: SatelliteTree, v: str, a: Assignment) -> bool:
    """Whether infinity lies in the mapped interiors at every edge of ``v``."""
    _require_valid(t)
    memo: dict = {}
    slopes = {k: as_slope(s) for k, s in a.items()}
    st = _vertex_interval(t, v, slopes, memo)
    for e in t.incoming(v):
        child = st.children[e.j]
        if not contains(map_interval(splice_matrix(t, e), interval_interior(child.interval)), INF):
            return False
    out = t.outgoing(v)
    m = splice_matrix(t, out) if out is not None else root_splice_matrix(t)
    return contains(map_interval(m, interval_interior(st.interval)), INF)


def monotone_stratum_member(t: SatelliteTree, a: Assignment) -> bool:
    if not is_lspace_filling(t, a).lspace:
        return False
    return all(monotone_at(t, v, a) for v in t.vertices)


# ---------------------------------------------------------------------------
# Topology and LO / CTF regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class TopologyReport:
    case_label: str
    retract: str
    h1_rank: int | None = None
    dimension: int | None = None
    epsilon_generators: str | None = None


def topology_classify(spec: TorusSatelliteSpec) -> TopologyReport:
    if spec.q <= 0:
        raise HypothesisError("the classifier needs q > 0")
    n = spec.n
    torus = f"torus T^{n - 1}"
    if spec.trivial:
        return TopologyReport("ii", torus)
    big_n = Fraction(spec.N)
    ratio = Fraction(spec.q, spec.p)
    if (spec.p > 1 and big_n > ratio) or (spec.p == 1 and big_n > ratio + 1):
        return TopologyReport("i.a", "lattice Lambda")
    if big_n == ratio + 1:
        if n > 2:
            return TopologyReport(
                "i.b",
                "non-contractible",
                h1_rank=math.comb(n, 2) - 1,
                epsilon_generators="e_i standard basis of Z^n; e_ij = e_i - e_j for i < j",
            )
        return TopologyReport("i.c", "contractible", dimension=1)
    if big_n == ratio:
        return TopologyReport("i.c", "contractible", dimension=n)
    return TopologyReport("ii", torus)


@dataclass(frozen=True)
class LoCtfRegions:
    """``exact`` is True when the predicates describe the regions exactly and
    False when they are guaranteed subsets; ``status`` is ``"open"`` when no
    statement is available."""

    status: str
    exact: bool
    lo: Callable[[Sequence[SlopeLike]], bool] | None = None
    ctf: Callable[[Sequence[SlopeLike]], bool] | None = None


def _in_rectangle_orbit(spec: TorusSatelliteSpec, y: Sequence[Slope]) -> bool:
    """Lattice orbit of ``[-inf, N_pq)^n minus [-inf, N_pq - p)^n``."""
    if any(s.is_inf for s in y):
        return False
    if sum(_ceil(s) for s in y) != 0:
        return False
    d1 = spec.D
    d2 = d1 + spec.p
    fr = [_frac(-s) for s in y]
    return all(f * d1 < 1 for f in fr) and any(f * d2 >= 1 for f in fr)


def lo_ctf_regions(spec: TorusSatelliteSpec) -> LoCtfRegions:
    if spec.trivial or spec.p <= 1:
        raise HypothesisError("needs a nontrivial companion and p > 1")
    big_n = Fraction(spec.N)

    def nl(alpha: Sequence[SlopeLike]) -> tuple[bool, tuple[Slope, ...]]:
        y = spec.to_sf(alpha)
        return not torus_lspace_sf(spec, y), y

    if big_n > Fraction(spec.q + 1, spec.p):
        def lo(alpha):
            return nl(alpha)[0]

        def ctf(alpha):
            bad, y = nl(alpha)
            return bad and not any(s.is_inf for s in y)

        return LoCtfRegions("exact", True, lo, ctf)
    if big_n < Fraction(spec.q, spec.p):
        def lo(alpha):
            bad, y = nl(alpha)
            return bad and not _in_rectangle_orbit(spec, y)

        def ctf(alpha):
            bad, y = nl(alpha)
            return bad and not any(s.is_inf for s in y) and not _in_rectangle_orbit(spec, y)

        return LoCtfRegions("lower-bound", False, lo, ctf)
    return LoCtfRegions("open", False)


# ---------------------------------------------------------------------------
# Rasters
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class RasterCell:
    a1: Slope
    a2: Slope
    label: RegionLabel | None
    error: str | None = None


def grid_values(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    if step <= 0:
        raise ValueError("step must be positive")
    if hi < lo:
        raise ValueError("empty window")
    count = math.floor((hi - lo) / step)
    return [lo + i * step for i in range(count + 1)]


@dataclass(frozen=True)
class _RasterJob:
    tree: SatelliteTree
    free: tuple[tuple[str, int], tuple[str, int]]
    pins: Mapping[tuple[str, int], Slope]
    basis: str
    spec: TorusSatelliteSpec | None
    mode: str
    monotone: bool


def _slot_pq(t: SatelliteTree, vid: str) -> int:
    v = t.vertices[vid]
    return v.p * v.q


def _label_tree_cell(job: _RasterJob, a1: Fraction, a2: Fraction) -> RasterCell:
    s1, s2 = as_slope(a1), as_slope(a2)
    t = job.tree
    vals = dict(job.pins)
    for (key, s) in zip(job.free, (s1, s2)):
        vals[key] = psi_inv(s, _slot_pq(t, key[0])) if job.basis == "s3" else s
    try:
        if job.spec is not None:
            y = [vals[("v1", i)] for i in range(1, job.spec.n + 1)]
            closed = torus_region_label(job.spec, y, basis="sf")
            if job.mode == "closed":
                lab = closed
            else:
                verdict = is_lspace_filling(t, vals).lspace
                if job.mode == "both" and verdict != closed.lspace:
                    return RasterCell(s1, s2, None, "oracle and closed form disagree")
                lab = RegionLabel(
                    verdict, closed.in_R, closed.in_Z, closed.in_B, closed.in_L_minus,
                    closed.in_L_plus, closed.in_lambda_orbit_of_Lstar, None, closed.in_Lstar,
                )
        else:
            verdict = is_lspace_filling(t, vals).lspace
            in_r = in_z = False
            for vid in t.vertices:
                flags = classify_special_slope(
                    [vals[(vid, i)] for i in t.free_indices(vid)]
                )
                in_r |= flags.in_R
                in_z |= flags.in_Z
            lab = RegionLabel(verdict, in_r, in_z, False, None, None, None)
        if job.monotone:
            mono = lab.lspace and all(monotone_at(t, v, vals) for v in t.vertices)
            lab = RegionLabel(
                lab.lspace, lab.in_R, lab.in_Z, lab.in_B, lab.in_L_minus, lab.in_L_plus,
                lab.in_lambda_orbit_of_Lstar, mono, lab.in_Lstar,
            )
        return RasterCell(s1, s2, lab)
    except (PeriodCapExceeded, NoClosedForm) as exc:
        return RasterCell(s1, s2, None, f"{type(exc).__name__}: {exc}")


def _run_chunk(args: tuple[_RasterJob, list[tuple[Fraction, Fraction]]]) -> list[RasterCell]:
    job, pts = args
    return [_label_tree_cell(job, a, b) for a, b in pts]


def raster_region(
    tree: SatelliteTree,
    free: tuple[tuple[str, int], tuple[str, int]],
    window: tuple[Fraction, Fraction, Fraction, Fraction],
    step: Fraction,
    *,
    pins: Mapping[tuple[str, int], SlopeLike] | None = None,
    basis: str = "s3",
    mode: str = "oracle",
    monotone: bool = False,
    jobs: int = 1,
) -> list[RasterCell]:
    """Label every grid point of a 2-D window of slope space.

    Cells are ordered with the first coordinate outermost.  ``mode`` is
    ``"oracle"``, ``"closed"`` (torus-link trees only) or ``"both"``, which
    uses the oracle and flags any cell where the closed form differs.
    """
    _require_valid(tree)
    if basis not in ("sf", "s3"):
        raise ValueError(f"unknown basis {basis!r}")
    if free[0] == free[1]:
        raise ValueError("the two free coordinates must differ")
    slots = set(tree.slots())
    for key in free:
        if key not in slots:
            raise ValueError(f"{key[0]}:{key[1]} is not a filled slot")
    pin_vals = {k: as_slope(v) for k, v in (pins or {}).items()}
    for key in slots - set(free):
        if key not in pin_vals:
            raise ValueError(f"slot {key[0]}:{key[1]} is neither free nor pinned")
    spec = None
    if len(tree.vertices) == 1 and tree.companion.kind in ("unknot", "lspace_knot"):
        v = tree.vertices[tree.root]
        spec = TorusSatelliteSpec(tree.companion.genus if tree.companion.kind == "lspace_knot" else 0, v.p, v.q, v.n)
    if mode != "oracle" and spec is None:
        raise NoClosedForm("closed-form rasters need a single-vertex torus-link tree")
    x0, x1, y0, y1 = window
    xs = grid_values(x0, x1, step)
    ys = grid_values(y0, y1, step)
    pts = [(a, b) for a in xs for b in ys]
    job = _RasterJob(tree, free, pin_vals, basis, spec, mode, monotone)
    if jobs <= 1 or len(pts) < 2:
        return _run_chunk((job, pts))
    size = max(1, len(pts) // (jobs * 4))
    chunks = [(job, pts[i:i + size]) for i in range(0, len(pts), size)]
    out: list[RasterCell] = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_run_chunk, chunks):
            out.extend(part)
    return out
