"""Named example trees and seeded random generators shared by the check
suites and the test-suite."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .satellite import SatelliteTree, tree_from_dict
from .slopes import (
    INF,
    Arc,
    Empty,
    FullCircle,
    LongitudeComplement,
    Point,
    Slope,
    SlopeInterval,
    as_slope,
)

__all__ = [
    "make_tree",
    "torus_tree",
    "NAMED_TREES",
    "random_slope",
    "random_tree",
    "random_assignment",
    "mirror_tree",
    "random_interval",
    "probe_points",
]


def make_tree(
    companion: dict,
    vertices: list[tuple[str, int, int, int]],
    edges: list[tuple[str, str, int]] = (),
) -> SatelliteTree:
    """Build a tree; the first vertex is the root."""
    return tree_from_dict(
        {
            "companion": companion,
            "vertices": [{"id": v, "p": p, "q": q, "n": n} for v, p, q, n in vertices],
            "root": vertices[0][0],
            "edges": [{"from": a, "to": b, "j": j} for a, b, j in edges],
        }
    )


def torus_tree(genus: int, p: int, q: int, n: int) -> SatelliteTree:
    comp = {"kind": "unknot"} if genus == 0 else {"kind": "lspace_knot", "genus": genus}
    return make_tree(comp, [("v1", p, q, n)])


NAMED_TREES: dict[str, SatelliteTree] = {
    "fig1": torus_tree(5, 2, 23, 2),
    "trefoil_cable": torus_tree(1, 2, 3, 1),
    "algebraic": make_tree({"kind": "unknot"}, [("r", 2, 3, 2), ("c", 2, 13, 2)], [("c", "r", 1)]),
    "algebraic_trefoil": make_tree(
        {"kind": "lspace_knot", "genus": 1}, [("r", 2, 3, 2), ("c", 2, 13, 2)], [("c", "r", 1)]
    ),
    "algebraic_exceptional": make_tree(
        {"kind": "unknot"}, [("r", 2, 3, 2), ("c", 3, 5, 2)], [("c", "r", -1)]
    ),
    "iterated_negative": make_tree(
        {"kind": "unknot"}, [("r", 2, 5, 2), ("c", 3, -2, 2)], [("c", "r", 1)]
    ),
    "iterated_chain": make_tree(
        {"kind": "lspace_knot", "genus": 1},
        [("r", 1, 3, 2), ("c", 2, -3, 2), ("d", 1, -1, 2)],
        [("c", "r", 1), ("d", "c", 2)],
    ),
}


# ---------------------------------------------------------------------------
# Random generators


def random_slope(rng: random.Random, *, max_den: int = 5, span: int = 3, p_inf: float = 0.1) -> Slope:
    if rng.random() < p_inf:
        return INF
    d = rng.randint(1, max_den)
    return as_slope(Fraction(rng.randint(-span * d, span * d), d))


def random_tree(
    rng: random.Random,
    *,
    max_vertices: int = 4,
    exceptional: bool = True,
    negative_q: bool = True,
    unknot: bool | None = None,
) -> SatelliteTree:
    k = rng.randint(1, max_vertices)
    vs: dict[str, list[int]] = {}
    edges: list[tuple[str, str, int]] = []
    for i in range(k):
        while True:
            p = rng.randint(1, 4)
            q = rng.randint(-7 if negative_q else 1, 7)
            if q and math.gcd(p, q) == 1:
                break
        vs[f"v{i}"] = [p, q, rng.randint(1, 3)]
    for i in range(1, k):
        parent = f"v{rng.randrange(i)}"
        pv = vs[parent]
        used = [e[2] for e in edges if e[1] == parent]
        opts = [j for j in range(1, pv[2] + 1) if j not in used]
        if exceptional and pv[0] > 1 and -1 not in used and rng.random() < 0.4:
            opts = [-1]
        if not opts:
            pv[2] += 1
            opts = [pv[2]]
        edges.append((f"v{i}", parent, rng.choice(opts)))
    if unknot is None:
        g = rng.randint(0, 3)
    else:
        g = 0 if unknot else rng.randint(1, 3)
    comp = {"kind": "unknot"} if g == 0 else {"kind": "lspace_knot", "genus": g}
    return make_tree(comp, [(v, *d) for v, d in vs.items()], edges)


def random_assignment(rng: random.Random, t: SatelliteTree, **kw) -> dict[tuple[str, int], Slope]:
    return {k: random_slope(rng, **kw) for k in t.slots()}


def mirror_tree(t: SatelliteTree) -> SatelliteTree:
    """Reflect every torus-link piece; only meaningful with an unknot companion."""
    if not t.companion.is_unknot:
        raise ValueError("mirroring needs an unknot companion")
    verts = [(v.id, v.p, -v.q, v.n) for v in t.vertices.values()]
    root = [x for x in verts if x[0] == t.root]
    rest = [x for x in verts if x[0] != t.root]
    return make_tree({"kind": "unknot"}, root + rest, [(e.src, e.dst, e.j) for e in t.edges])


def random_interval(rng: random.Random, *, max_den: int = 4, span: int = 3) -> SlopeInterval:
    r = rng.random()
    if r < 0.05:
        return Empty()
    if r < 0.1:
        return FullCircle()
    if r < 0.2:
        return Point(random_slope(rng, max_den=max_den, span=span))
    if r < 0.3:
        return LongitudeComplement(random_slope(rng, max_den=max_den, span=span))
    while True:
        lo = random_slope(rng, max_den=max_den, span=span)
        hi = random_slope(rng, max_den=max_den, span=span)
        if lo != hi:
            return Arc(lo, hi, rng.random() < 0.5, rng.random() < 0.5)


def _endpoints(i: SlopeInterval) -> list[Slope]:
    if isinstance(i, Point):
        return [i.slope]
    if isinstance(i, LongitudeComplement):
        return [i.longitude]
    if isinstance(i, Arc):
        return [i.lo, i.hi]
    return []


def probe_points(*intervals: SlopeInterval) -> list[Slope]:
    """Every endpoint plus one slope inside each gap between consecutive
    endpoints; membership is constant on each gap, so these decide any
    set-level question about the given intervals."""
    ends = sorted(
        {e for i in intervals for e in _endpoints(i)},
        key=lambda s: (1, Fraction(0)) if s.is_inf else (0, s.fraction()),
    )
    if not ends:
        return [as_slope(0)]
    out = list(ends)
    for a, b in zip(ends, ends[1:] + ends[:1]):
        if a == b:
            # a single endpoint: the gap is everything else
            out.append(as_slope(a.fraction() + 1) if not a.is_inf else as_slope(0))
        elif not a.is_inf and not b.is_inf and a.fraction() < b.fraction():
            out.append(as_slope((a.fraction() + b.fraction()) / 2))
        elif a.is_inf:
            out.append(as_slope(b.fraction() - 1))
        else:
            out.append(as_slope(a.fraction() + 1))
    return out
