"""Satellite trees of Seifert pieces and the L-space filling oracle.

A tree has one Seifert vertex ``(p, q, n)`` per JSJ piece.  Every vertex
except the root has an outgoing edge pointing toward the root; the edge
index ``j`` names the boundary slot of the parent it is spliced into, with
``j = -1`` meaning the multiplicity-``p`` exceptional fiber.  The root's
slot 0 is glued to the exterior of the companion knot in S^3.

The membership oracle is computed along two independent routes and the
results are compared:

* fiber route: the companion is treated as one more glued piece at the
  root, a regular fiber is drilled, and the manifold is an L-space iff the
  slope 0 lies in the interval of that drilled fiber exterior;
* gluing route: the root interval at slot 0 is computed and then glued
  against the companion's interval with the endpoint rules for
  compressible and incompressible boundaries.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping

from .seifert import (
    FiberExteriorInput,
    PeriodCapExceeded,
    fiber_exterior_interval,
    pstar_qstar,
    rational_longitude,
)
from .slopes import (
    INF,
    Arc,
    Empty,
    FullCircle,
    IntMatrix2,
    LongitudeComplement,
    Point,
    Slope,
    SlopeInterval,
    SlopeLike,
    as_slope,
    contains,
    covers_circle,
    interval_interior,
    lft_apply,
    map_interval,
    parse_slope,
)

__all__ = [
    "TreeError",
    "RouteDisagreement",
    "GluingHypothesesUnmet",
    "Vertex",
    "Edge",
    "CompanionKnot",
    "SatelliteTree",
    "Diagnostic",
    "Assignment",
    "load_tree",
    "tree_from_dict",
    "tree_to_dict",
    "parse_assignment",
    "assignment_from_dict",
    "validate_tree",
    "AlgebraicityReport",
    "algebraicity_check",
    "splice_matrix",
    "root_splice_matrix",
    "asymptotes",
    "asymptotes_closed_form",
    "companion_matrix",
    "companion_interval_sf",
    "VertexIntervalState",
    "vertex_interval",
    "LspaceVerdict",
    "is_lspace_filling",
    "slot_interval",
    "lspace_by_fiber_route",
    "lspace_by_gluing_route",
    "YBar",
    "ybar_from_state",
    "ybar_direct",
    "prop53_bound_check",
]


class TreeError(ValueError):
    """A satellite tree or slope assignment is malformed."""

    def __init__(self, diagnostics: Iterable["Diagnostic"] | str):
        if isinstance(diagnostics, str):
            self.diagnostics: tuple[Diagnostic, ...] = (Diagnostic("invalid", diagnostics),)
        else:
            self.diagnostics = tuple(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class RouteDisagreement(AssertionError):
    """The two independent oracle routes returned different verdicts."""


class GluingHypothesesUnmet(ValueError):
    """The companion/graph-side combination has no proven gluing rule."""


# ---------------------------------------------------------------------------
# Tree model
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Vertex:
    id: str
    p: int
    q: int
    n: int

    @property
    def p_star(self) -> int:
        return pstar_qstar(self.p, self.q)[0]

    @property
    def q_star(self) -> int:
        return pstar_qstar(self.p, self.q)[1]


@dataclass(frozen=True, slots=True)
class Edge:
    src: str
    dst: str
    j: int

    @property
    def exceptional(self) -> bool:
        return self.j == -1


@dataclass(frozen=True, slots=True)
class CompanionKnot:
    """``unknot``, ``lspace_knot`` (positive L-space knot of given genus), or
    ``floer_simple`` with an explicit closed S^3-basis interval."""

    kind: str
    genus: int = 0
    interval: SlopeInterval | None = None

    @property
    def is_unknot(self) -> bool:
        return self.kind == "unknot"

    def s3_interval(self) -> SlopeInterval:
        if self.kind == "unknot":
            return LongitudeComplement(as_slope(0))
        if self.kind == "lspace_knot":
            return Arc(as_slope(2 * self.genus - 1), INF)
        if self.interval is None:
            raise TreeError("floer_simple companion needs an interval")
        return self.interval


@dataclass(frozen=True, slots=True)
class SatelliteTree:
    vertices: Mapping[str, Vertex]
    root: str
    edges: tuple[Edge, ...]
    companion: CompanionKnot

    def vertex(self, vid: str) -> Vertex:
        return self.vertices[vid]

    def incoming(self, vid: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.dst == vid)

    def outgoing(self, vid: str) -> Edge | None:
        for e in self.edges:
            if e.src == vid:
                return e
        return None

    def smooth_indices(self, vid: str) -> frozenset[int]:
        return frozenset(e.j for e in self.incoming(vid) if e.j != -1)

    def free_indices(self, vid: str) -> tuple[int, ...]:
        """``I_v``: the boundary slots that are Dehn filled."""
        used = self.smooth_indices(vid)
        return tuple(i for i in range(1, self.vertices[vid].n + 1) if i not in used)

    def slots(self) -> tuple[tuple[str, int], ...]:
        return tuple((vid, i) for vid in self.vertices for i in self.free_indices(vid))

    def postorder(self) -> tuple[str, ...]:
        out: list[str] = []

        def visit(v: str) -> None:
            for e in self.incoming(v):
                visit(e.src)
            out.append(v)

        visit(self.root)
        return tuple(out)


@dataclass(frozen=True, slots=True)
class Diagnostic:
    code: str
    message: str
    vertex: str | None = None
    edge: tuple[str, str, int] | None = None

    def __str__(self) -> str:
        where = ""
        if self.vertex is not None:
            where = f" [vertex {self.vertex}]"
        elif self.edge is not None:
            where = f" [edge {self.edge[0]}->{self.edge[1]} j={self.edge[2]}]"
        return f"{self.code}: {self.message}{where}"


Assignment = Mapping[tuple[str, int], Slope]


def tree_from_dict(obj: Mapping[str, Any]) -> SatelliteTree:
    try:
        comp = obj.get("companion", {"kind": "unknot"})
        kind = comp.get("kind", "unknot")
        interval = None
        if kind == "floer_simple":
            lo = parse_slope(str(comp["lower"]))
            hi = parse_slope(str(comp["upper"]))
            interval = Arc(lo, hi)
        companion = CompanionKnot(kind, int(comp.get("genus", 0)), interval)
        vertices: dict[str, Vertex] = {}
        for v in obj["vertices"]:
            vid = str(v["id"])
            if vid in vertices:
                raise TreeError(f"duplicate vertex id {vid!r}")
            vertices[vid] = Vertex(vid, int(v["p"]), int(v["q"]), int(v["n"]))
        edges = tuple(
            Edge(str(e["from"]), str(e["to"]), int(e["j"])) for e in obj.get("edges", [])
        )
        return SatelliteTree(vertices, str(obj["root"]), edges, companion)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, TreeError):
            raise
        raise TreeError(f"bad tree description: {exc}") from exc


def tree_to_dict(t: SatelliteTree) -> dict[str, Any]:
    comp: dict[str, Any] = {"kind": t.companion.kind}
    if t.companion.kind == "lspace_knot":
        comp["genus"] = t.companion.genus
    return {
        "companion": comp,
        "vertices": [
            {"id": v.id, "p": v.p, "q": v.q, "n": v.n} for v in t.vertices.values()
        ],
        "root": t.root,
        "edges": [{"from": e.src, "to": e.dst, "j": e.j} for e in t.edges],
    }


def load_tree(path: str | Path) -> SatelliteTree:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise TreeError(f"cannot read tree file: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TreeError(f"tree file is not JSON: {exc}") from exc
    return tree_from_dict(obj)


def assignment_from_dict(obj: Mapping[str, Mapping[str, Any]]) -> dict[tuple[str, int], Slope]:
    out: dict[tuple[str, int], Slope] = {}
    for vid, slots in obj.items():
        for i, s in slots.items():
            out[(str(vid), int(i))] = parse_slope(str(s))
    return out


def parse_assignment(text: str) -> dict[tuple[str, int], Slope]:
    """Parse ``"v1:1=3/4,v1:2=inf"``."""
    out: dict[tuple[str, int], Slope] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, val = part.partition("=")
        vid, sep2, idx = key.partition(":")
        if not sep or not sep2:
            raise ValueError(f"malformed slope entry {part!r}")
        out[(vid.strip(), int(idx))] = parse_slope(val)
    return out


# ---------------------------------------------------------------------------
# Validation and algebraicity
# ---------------------------------------------------------------------------


def validate_tree(t: SatelliteTree) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    for v in t.vertices.values():
        if v.p <= 0:
            diags.append(Diagnostic("p-nonpositive", f"p = {v.p} must be positive", v.id))
        if v.n <= 0:
            diags.append(Diagnostic("n-nonpositive", f"n = {v.n} must be positive", v.id))
        if v.q == 0:
            diags.append(Diagnostic("q-zero", "q must be nonzero", v.id))
        if math.gcd(v.p, v.q) != 1:
            diags.append(Diagnostic("not-coprime", f"gcd({v.p}, {v.q}) != 1", v.id))
    if t.root not in t.vertices:
        diags.append(Diagnostic("no-root", f"root {t.root!r} is not a vertex"))
        return diags
    out_count: dict[str, int] = {vid: 0 for vid in t.vertices}
    for e in t.edges:
        key = (e.src, e.dst, e.j)
        if e.src not in t.vertices or e.dst not in t.vertices:
            diags.append(Diagnostic("unknown-vertex", "edge endpoint is not a vertex", edge=key))
            continue
        out_count[e.src] += 1
        if e.src == t.root:
            diags.append(Diagnostic("root-edge", "the root has no explicit outgoing edge", edge=key))
        dst = t.vertices[e.dst]
        if e.j == -1:
            if dst.p <= 1:
                diags.append(
                    Diagnostic("exceptional-p", "exceptional splice needs p > 1 at the target", edge=key)
                )
        elif not 1 <= e.j <= dst.n:
            diags.append(Diagnostic("bad-index", f"j must be -1 or in 1..{dst.n}", edge=key))
    for vid, c in out_count.items():
        if vid != t.root and c != 1:
            diags.append(Diagnostic("out-degree", f"expected one outgoing edge, found {c}", vid))
    for vid in t.vertices:
        js = [e.j for e in t.edges if e.dst == vid]
        if js.count(-1) > 1:
            diags.append(Diagnostic("exceptional-twice", "two exceptional splices into one vertex", vid))
        smooth = [j for j in js if j != -1]
        if len(smooth) != len(set(smooth)):
            diags.append(Diagnostic("index-reused", "two edges share a boundary index", vid))
    if not diags:
        for vid in t.vertices:
            seen = {vid}
            cur = vid
            while cur != t.root:
                nxt = t.outgoing(cur)
                if nxt is None:
                    break
                cur = nxt.dst
                if cur in seen:
                    diags.append(Diagnostic("cycle", "edges form a cycle", vid))
                    break
                seen.add(cur)
    c = t.companion
    if c.kind not in ("unknot", "lspace_knot", "floer_simple"):
        diags.append(Diagnostic("companion-kind", f"unknown companion kind {c.kind!r}"))
    elif c.kind == "lspace_knot" and c.genus < 1:
        diags.append(Diagnostic("companion-genus", "an L-space knot companion needs genus >= 1"))
    return diags


def _require_valid(t: SatelliteTree) -> None:
    diags = validate_tree(t)
    if diags:
        raise TreeError(diags)


@dataclass(frozen=True, slots=True)
class AlgebraicityReport:
    is_algebraic: bool
    deltas: Mapping[Edge, int]


def edge_delta(t: SatelliteTree, e: Edge) -> int:
    c, u = t.vertices[e.src], t.vertices[e.dst]
    if e.j == -1:
        return u.p * c.q - c.p * u.q
    return c.q - u.p * c.p * u.q


def algebraicity_check(t: SatelliteTree) -> AlgebraicityReport:
    deltas = {e: edge_delta(t, e) for e in t.edges}
    ok = all(v.q > 0 for v in t.vertices.values()) and all(d > 0 for d in deltas.values())
    return AlgebraicityReport(ok, deltas)


# ---------------------------------------------------------------------------
# Splice maps
# ---------------------------------------------------------------------------


def _smooth_matrix(c: Vertex) -> IntMatrix2:
    ps, qs = pstar_qstar(c.p, c.q)
    return IntMatrix2(c.p, -qs, c.q, -ps)


def splice_matrix(t: SatelliteTree, e: Edge) -> IntMatrix2:
    """Map from the child's slot-0 SF basis to the parent's slot ``j``."""
    c, u = t.vertices[e.src], t.vertices[e.dst]
    m = _smooth_matrix(c)
    if e.j != -1:
        return m
    ps, qs = pstar_qstar(u.p, u.q)
    return IntMatrix2(ps, -qs, -u.q, u.p) @ m


def root_splice_matrix(t: SatelliteTree) -> IntMatrix2:
    """The smooth map attached to the root's implicit outgoing edge."""
    return _smooth_matrix(t.vertices[t.root])


def asymptotes(t: SatelliteTree, e: Edge) -> tuple[Slope, Slope]:
    """``(xi, eta)``: image of infinity and preimage of infinity."""
    m = splice_matrix(t, e)
    return lft_apply(m, INF), lft_apply(m.inverse(), INF)


def asymptotes_closed_form(t: SatelliteTree, e: Edge) -> tuple[Slope, Slope]:
    c, u = t.vertices[e.src], t.vertices[e.dst]
    ps_c, qs_c = pstar_qstar(c.p, c.q)
    if e.j != -1:
        return as_slope(Fraction(c.p, c.q)), as_slope(Fraction(ps_c, c.q))
    _, qs_u = pstar_qstar(u.p, u.q)
    d = edge_delta(t, e)
    if d == 0:
        raise ZeroDivisionError("vanishing edge determinant")
    xi = Fraction(-qs_u, u.p) + Fraction(c.p, u.p * d)
    eta = Fraction(qs_c, c.p) + Fraction(u.p, c.p * d)
    return as_slope(xi), as_slope(eta)


def companion_matrix(t: SatelliteTree) -> IntMatrix2:
    """From the companion's S^3 basis to the root's SF basis at slot 0."""
    r = t.vertices[t.root]
    ps, qs = pstar_qstar(r.p, r.q)
    return IntMatrix2(qs, -ps, r.p, -r.q)


def companion_interval_sf(t: SatelliteTree) -> SlopeInterval:
    return map_interval(companion_matrix(t), t.companion.s3_interval())


# ---------------------------------------------------------------------------
# Vertex intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexIntervalState:
    vertex: str
    interval: SlopeInterval
    is_bc: bool
    longitude: Slope | None
    y_minus: Slope | None
    y_plus: Slope | None
    J_bc: frozenset[int]
    J_bi: frozenset[int]
    J_biZ_plus: frozenset[int]
    J_biZ_minus: frozenset[int]
    # assembled data, kept for the decomposition checks
    filled: Mapping[int, Slope] = field(default_factory=dict)
    bc_slopes: Mapping[int, Slope] = field(default_factory=dict)
    bi_intervals: Mapping[int, SlopeInterval] = field(default_factory=dict)
    point_children: Mapping[int, Slope] = field(default_factory=dict)
    children: Mapping[int, "VertexIntervalState"] = field(default_factory=dict)

    @property
    def is_floer_simple(self) -> bool:
        return isinstance(self.interval, (Arc, LongitudeComplement, FullCircle))


@dataclass(frozen=True)
class _Assembled:
    seifert: tuple[Slope, ...]
    arcs: tuple[SlopeInterval, ...]
    points: tuple[Slope, ...]
    dead: bool
    J_bc: frozenset[int]
    J_bi: frozenset[int]
    J_biZ_plus: frozenset[int]
    J_biZ_minus: frozenset[int]
    filled: dict[int, Slope]
    bc_slopes: dict[int, Slope]
    bi_intervals: dict[int, SlopeInterval]
    point_children: dict[int, Slope]
    children: dict[int, VertexIntervalState]


def _is_integer(s: Slope) -> bool:
    return s.den == 1


def _assemble(
    t: SatelliteTree, vid: str, a: Assignment, memo: dict[str, VertexIntervalState]
) -> _Assembled:
    v = t.vertices[vid]
    _, qs = pstar_qstar(v.p, v.q)
    fiber_slot: Slope | None = as_slope(Fraction(-qs, v.p))
    filled: dict[int, Slope] = {}
    for i in t.free_indices(vid):
        if (vid, i) not in a:
            raise TreeError([Diagnostic("missing-slope", f"no slope for slot {i}", vid)])
        filled[i] = as_slope(a[(vid, i)])
    seifert: list[Slope] = []
    arcs: list[SlopeInterval] = []
    points: list[Slope] = []
    dead = False
    J_bc: set[int] = set()
    J_bi: set[int] = set()
    Jz_plus: set[int] = set()
    Jz_minus: set[int] = set()
    bc_slopes: dict[int, Slope] = {}
    bi_intervals: dict[int, SlopeInterval] = {}
    point_children: dict[int, Slope] = {}
    children: dict[int, VertexIntervalState] = {}
    for e in sorted(t.incoming(vid), key=lambda e: e.j):
        st = _vertex_interval(t, e.src, a, memo)
        children[e.j] = st
        m = splice_matrix(t, e)
        if e.j == -1:
            fiber_slot = None
        if isinstance(st.interval, Empty):
            dead = True
            continue
        if st.is_bc:
            assert st.longitude is not None
            s = lft_apply(m, st.longitude)
            seifert.append(s)
            J_bc.add(e.j)
            bc_slopes[e.j] = s
            continue
        J_bi.add(e.j)
        if isinstance(st.interval, Point):
            s = lft_apply(m, st.interval.slope)
            points.append(s)
            point_children[e.j] = s
            continue
        img = map_interval(m, st.interval)
        if isinstance(img, LongitudeComplement):
            lo = hi = img.longitude
        elif isinstance(img, Arc):
            lo, hi = img.lo, img.hi
        else:
            raise TreeError(f"child {e.src} has a full-circle interval")
        arcs.append(img)
        bi_intervals[e.j] = img
        if _is_integer(hi):
            Jz_plus.add(e.j)
        if _is_integer(lo):
            Jz_minus.add(e.j)
    if fiber_slot is not None:
        seifert.insert(0, fiber_slot)
    seifert.extend(filled[i] for i in sorted(filled))
    return _Assembled(
        tuple(seifert), tuple(arcs), tuple(points), dead,
        frozenset(J_bc), frozenset(J_bi), frozenset(Jz_plus), frozenset(Jz_minus),
        filled, bc_slopes, bi_intervals, point_children, children,
    )


@dataclass(frozen=True, slots=True)
class _Solved:
    interval: SlopeInterval
    is_bc: bool
    longitude: Slope | None
    y_minus: Slope | None
    y_plus: Slope | None


def _solve_with_points(
    seifert: tuple[Slope, ...], arcs: tuple[SlopeInterval, ...], points: tuple[Slope, ...]
) -> _Solved:
    """Interval at the open slot when some glued piece has a one-point interval.

    Such a piece is incompressible and only becomes an L-space when glued to
    a boundary-compressible side whose longitude is its single L-space slope.
    The complement of the piece must therefore be compressible after filling
    the open slot: either the filling slope is the fiber (and every other
    piece then sees the fiber slope) or the Seifert part collapses to a solid
    torus, which needs at most one non-integral slope.
    """
    def _fiber_ok() -> bool:
        return all(contains(i, INF) for i in arcs) and all(s.is_inf for s in points)

    n_inf = sum(1 for s in seifert if s.is_inf)
    if n_inf >= 2:
        return _Solved(Empty(), True, INF, None, None)
    if n_inf == 1:
        if _fiber_ok():
            return _Solved(LongitudeComplement(INF), True, INF, None, None)
        return _Solved(Empty(), True, INF, None, None)
    if _fiber_ok():
        return _Solved(Point(INF), False, None, INF, INF)
    if len(points) == 1 and not arcs and not points[0].is_inf:
        alpha = -sum((s.fraction() for s in seifert), Fraction(0)) - points[0].fraction()
        cand = as_slope(alpha)
        non_integral = sum(1 for s in (*seifert, cand) if not _is_integer(s))
        if non_integral <= 1:
            return _Solved(Point(cand), False, None, cand, cand)
    return _Solved(Empty(), False, None, None, None)


def _solve(
    seifert: tuple[Slope, ...], arcs: tuple[SlopeInterval, ...], points: tuple[Slope, ...]
) -> _Solved:
    if points:
        return _solve_with_points(seifert, arcs, points)
    res = fiber_exterior_interval(FiberExteriorInput(seifert, arcs))
    lon = None
    if res.is_bc:
        lon = res.interval.longitude if isinstance(res.interval, LongitudeComplement) else INF
    return _Solved(res.interval, res.is_bc, lon, res.y_minus, res.y_plus)


def _vertex_interval(
    t: SatelliteTree, vid: str, a: Assignment, memo: dict[str, VertexIntervalState]
) -> VertexIntervalState:
    if vid in memo:
        return memo[vid]
    asm = _assemble(t, vid, a, memo)
    if asm.dead:
        sol = _Solved(Empty(), False, None, None, None)
    else:
        sol = _solve(asm.seifert, asm.arcs, asm.points)
    st = VertexIntervalState(
        vid, sol.interval, sol.is_bc, sol.longitude, sol.y_minus, sol.y_plus,
        asm.J_bc, asm.J_bi, asm.J_biZ_plus, asm.J_biZ_minus,
        asm.filled, asm.bc_slopes, asm.bi_intervals, asm.point_children, asm.children,
    )
    memo[vid] = st
    return st


def vertex_interval(t: SatelliteTree, v: str, a: Assignment) -> VertexIntervalState:
    """Interval of the subtree below ``v`` at its slot 0, in the SF_v basis."""
    _require_valid(t)
    return _vertex_interval(t, v, {k: as_slope(s) for k, s in a.items()}, {})


# ---------------------------------------------------------------------------
# Root gluing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LspaceVerdict:
    lspace: bool
    root_state: VertexIntervalState
    companion_interval: SlopeInterval
    drilled_interval: SlopeInterval

    @property
    def root_interval(self) -> SlopeInterval:
        return self.root_state.interval


def _companion_piece(t: SatelliteTree) -> tuple[list[Slope], list[SlopeInterval]]:
    """The companion exterior as seen from the root's slot 0."""
    img = companion_interval_sf(t)
    if t.companion.is_unknot:
        assert isinstance(img, LongitudeComplement)
        return [img.longitude], []
    if not isinstance(img, Arc) or not (img.lo_closed and img.hi_closed):
        raise GluingHypothesesUnmet("companion interval must be a closed arc")
    return [], [img]


def lspace_by_fiber_route(
    t: SatelliteTree, a: Assignment, memo: dict[str, VertexIntervalState] | None = None
) -> tuple[bool, SlopeInterval]:
    memo = {} if memo is None else memo
    asm = _assemble(t, t.root, a, memo)
    if asm.dead:
        return False, Empty()
    extra_slopes, extra_arcs = _companion_piece(t)
    sol = _solve(
        asm.seifert + tuple(extra_slopes), asm.arcs + tuple(extra_arcs), asm.points
    )
    return contains(sol.interval, 0), sol.interval


def lspace_by_gluing_route(t: SatelliteTree, root: VertexIntervalState) -> bool:
    comp = companion_interval_sf(t)
    iv = root.interval
    if isinstance(iv, Empty):
        return False
    if t.companion.is_unknot:
        assert isinstance(comp, LongitudeComplement)
        return contains(iv, comp.longitude)
    if root.is_bc:
        assert root.longitude is not None
        return contains(comp, root.longitude)
    if isinstance(iv, Point):
        return False
    return covers_circle(interval_interior(comp), interval_interior(iv))


def is_lspace_filling(t: SatelliteTree, a: Assignment) -> LspaceVerdict:
    """Decide whether the filled satellite is an L-space, by two routes."""
    _require_valid(t)
    slopes = {k: as_slope(s) for k, s in a.items()}
    missing = [k for k in t.slots() if k not in slopes]
    if missing:
        raise TreeError(
            [Diagnostic("missing-slope", f"no slope for slot {i}", vid) for vid, i in missing]
        )
    memo: dict[str, VertexIntervalState] = {}
    root = _vertex_interval(t, t.root, slopes, memo)
    by_fiber, drilled = lspace_by_fiber_route(t, slopes, memo)
    by_gluing = lspace_by_gluing_route(t, root)
    if by_fiber != by_gluing:
        raise RouteDisagreement(
            f"fiber route says {by_fiber}, gluing route says {by_gluing} "
            f"for {sorted((k, str(s)) for k, s in slopes.items())}"
        )
    return LspaceVerdict(by_fiber, root, companion_interval_sf(t), drilled)


def slot_interval(t: SatelliteTree, a: Assignment, slot: int) -> SlopeInterval:
    """L-space interval of the root slot ``slot`` with every other slot filled.

    The open slot is a regular-fiber boundary of the root piece, so the
    companion exterior simply joins the list of glued pieces.
    """
    _require_valid(t)
    if slot not in t.free_indices(t.root):
        raise TreeError(f"slot {slot} of the root is not a filled slot")
    slopes = {k: as_slope(s) for k, s in a.items() if k != (t.root, slot)}
    slopes[(t.root, slot)] = INF  # placeholder, removed below
    memo: dict[str, VertexIntervalState] = {}
    asm = _assemble(t, t.root, slopes, memo)
    if asm.dead:
        return Empty()
    seifert = list(asm.seifert)
    seifert.remove(INF)
    extra_slopes, extra_arcs = _companion_piece(t)
    sol = _solve(tuple(seifert + extra_slopes), asm.arcs + tuple(extra_arcs), asm.points)
    return sol.interval


# ---------------------------------------------------------------------------
# Shifted endpoints ybar (smooth vertices without point children)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class YBar:
    minus: Fraction
    plus: Fraction


def _state_data(t: SatelliteTree, st: VertexIntervalState) -> tuple[list[Fraction], list[tuple[Fraction, Fraction]]]:
    if -1 in st.children or st.point_children:
        raise ValueError("ybar needs a vertex with only smooth, Floer simple children")
    if set(st.children) != set(st.bc_slopes) | set(st.bi_intervals):
        raise ValueError("ybar needs every child to have a nonempty interval")
    singles = [s for s in (*st.filled.values(), *st.bc_slopes.values())]
    pairs = []
    for iv in st.bi_intervals.values():
        if isinstance(iv, Arc):
            pairs.append((iv.lo, iv.hi))
        else:
            assert isinstance(iv, LongitudeComplement)
            pairs.append((iv.longitude, iv.longitude))
    if any(s.is_inf for s in singles) or any(x.is_inf for pr in pairs for x in pr):
        raise ValueError("ybar needs finite slopes")
    return [s.fraction() for s in singles], [(lo.fraction(), hi.fraction()) for lo, hi in pairs]


def ybar_from_state(t: SatelliteTree, st: VertexIntervalState) -> YBar:
    """Shift the computed endpoints by the integer parts of the slot data."""
    if st.y_minus is None or st.y_plus is None or st.y_minus.is_inf or st.y_plus.is_inf:
        raise ValueError("endpoints unavailable")
    singles, pairs = _state_data(t, st)
    ym = st.y_minus.fraction()
    yp = st.y_plus.fraction()
    ym += sum(math.ceil(hi) - 1 for _, hi in pairs) + sum(math.floor(s) for s in singles)
    yp += sum(math.floor(lo) + 1 for lo, _ in pairs) + sum(math.ceil(s) for s in singles)
    return YBar(ym, yp)


def _ybar_sigma_minus(singles, pairs, k: int) -> int:
    return sum(math.ceil((hi - math.floor(hi)) * k) - 1 for _, hi in pairs) + sum(
        math.floor((s - math.floor(s)) * k) for s in singles
    )


def _ybar_sigma_plus(singles, pairs, k: int) -> int:
    return sum(math.ceil(((-lo) - math.floor(-lo)) * k) - 1 for lo, _ in pairs) + sum(
        math.floor(((-s) - math.floor(-s)) * k) for s in singles
    )


def ybar_direct(
    t: SatelliteTree, st: VertexIntervalState, period_limit: int | None = None
) -> YBar:
    """The same shifted endpoints from their own sup/inf over one period.

    Raises ``PeriodCapExceeded`` when the period exceeds ``period_limit``.
    """
    v = t.vertices[st.vertex]
    _, qs = pstar_qstar(v.p, v.q)
    singles, pairs = _state_data(t, st)
    z_plus = sum(1 for _, hi in pairs if hi.denominator == 1)
    z_minus = sum(1 for lo, _ in pairs if lo.denominator == 1)
    period = v.p
    for x in (*singles, *(c for pr in pairs for c in pr)):
        period = math.lcm(period, x.denominator)
    if period_limit is not None and period > period_limit:
        raise PeriodCapExceeded(f"period {period} exceeds {period_limit}")
    r = Fraction(qs, v.p)
    lo_vals = [
        Fraction(-1 + math.ceil(r * k) - _ybar_sigma_minus(singles, pairs, k), k) - z_plus
        for k in range(1, period + 1)
    ]
    hi_vals = [
        Fraction(1 + math.floor(r * k) + _ybar_sigma_plus(singles, pairs, k), k) + z_minus
        for k in range(1, period + 1)
    ]
    # beyond one period the terms only approach their limits
    lim_lo = r - z_plus - sum(hi - math.floor(hi) for _, hi in pairs) - sum(
        s - math.floor(s) for s in singles
    )
    lim_hi = r + z_minus + sum((-lo) - math.floor(-lo) for lo, _ in pairs) + sum(
        (-s) - math.floor(-s) for s in singles
    )
    return YBar(max(max(lo_vals), lim_lo), min(min(hi_vals), lim_hi))


def prop53_bound_check(
    t: SatelliteTree, v: str, a: Assignment, period_limit: int | None = None
) -> bool:
    """Bounds on the shifted endpoints when the sigma sums at the residues of
    ``+-p`` modulo ``q`` are positive.

    The per-k inequalities are strict.  A boundary-compressible vertex only
    approaches its extrema, so there the bound may be met with equality.
    """
    st = vertex_interval(t, v, a)
    vert = t.vertices[v]
    p, q = vert.p, vert.q
    ps, _ = pstar_qstar(p, q)
    try:
        singles, pairs = _state_data(t, st)
        yb = ybar_direct(t, st, period_limit)
    except ValueError:
        return True
    if st.is_bc:
        below, above = (lambda x, b: x <= b), (lambda x, b: x >= b)
    else:
        below, above = (lambda x, b: x < b), (lambda x, b: x > b)
    r_pos, r_neg = p % abs(q), (-p) % abs(q)
    base = Fraction(ps, q)
    ok = True
    if q > 0:
        if r_pos >= 2 and _ybar_sigma_minus(singles, pairs, r_pos) > 0:
            ok &= below(yb.minus, base - Fraction(1, r_pos * q))
        if r_neg >= 2 and _ybar_sigma_plus(singles, pairs, r_neg) > 0:
            ok &= above(yb.plus, base + Fraction(1, r_neg * q))
    else:
        if r_neg >= 2 and _ybar_sigma_minus(singles, pairs, r_neg) > 0:
            ok &= below(yb.minus, base + Fraction(1, r_neg * q))
        if r_pos >= 2 and _ybar_sigma_plus(singles, pairs, r_pos) > 0:
            ok &= above(yb.plus, base - Fraction(1, r_pos * q))
    return bool(ok)
