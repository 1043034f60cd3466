"""Cross-validation suites run by ``lspace check``.

Each suite is a pure function of an RNG seed and returns how many cases it
ran and which ones failed.  ``negative_control`` runs the interval laws
against a deliberately broken complement and must fail; it is not part of
the default run.
"""

from __future__ import annotations

import math
import random
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .fixtures import (
    NAMED_TREES,
    mirror_tree,
    probe_points,
    random_assignment,
    random_interval,
    random_slope,
    random_tree,
)
from .regions import (
    NoClosedForm,
    TorusSatelliteSpec,
    inner_min_regions,
    monotone_at,
    raster_region,
    sample_inner_region,
    torus_lspace_s3,
    torus_lspace_sf,
    torus_region_label,
)
from .satellite import (
    SatelliteTree,
    is_lspace_filling,
    prop53_bound_check,
    validate_tree,
    vertex_interval,
    ybar_direct,
    ybar_from_state,
)
from .seifert import (
    FiberExteriorInput,
    PeriodCapExceeded,
    UnclassifiedStructureCase,
    fiber_exterior_interval,
    pstar_qstar,
)
from .slopes import (
    INF,
    IntMatrix2,
    Arc,
    SlopeInterval,
    as_slope,
    contains,
    covers_circle,
    interval_complement,
    interval_interior,
    is_subset,
    lft_apply,
    map_interval,
)

__all__ = ["SuiteResult", "SUITES", "DEFAULT_SUITES", "DEFAULT_SEED", "run_suite", "run_suites"]

DEFAULT_SEED = 20240611
_MAX_REPORTED = 10


@dataclass(slots=True)
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    n_failed: int = 0
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.n_failed == 0

    def fail(self, detail: str) -> None:
        self.n_failed += 1
        if len(self.failures) < _MAX_REPORTED:
            self.failures.append(detail)


def _fmt(a) -> str:
    return ",".join(f"{v}:{i}={s}" for (v, i), s in sorted(a.items()))


# ---------------------------------------------------------------------------
# Suites


def suite_lemma46(rng: random.Random, res: SuiteResult, *, bump: int = 1) -> None:
    for p in range(2, 21):
        for q in range(2, 21):
            if math.gcd(p, q) != 1:
                continue
            ps, qs = pstar_qstar(p, q)
            for k in range(1, 501):
                res.cases += 1
                lhs = Fraction(bump + (qs * k) // p + k // (p + q), k)
                if lhs < Fraction(ps, q):
                    res.fail(f"p={p} q={q} k={k}")


def _interval_laws(rng: random.Random, res: SuiteResult, complement: Callable) -> None:
    for _ in range(10_000):
        a = random_interval(rng)
        b = random_interval(rng)
        res.cases += 1
        pts = probe_points(a, b)
        ca = complement(a)
        if complement(ca) != a:
            res.fail(f"complement not an involution at {a}")
            continue
        if any(contains(ca, x) == contains(a, x) for x in pts):
            res.fail(f"complement of {a} is not pointwise")
            continue
        covers = all(contains(a, x) or contains(b, x) for x in pts)
        if covers_circle(a, b) != covers:
            res.fail(f"cover test wrong for {a}, {b}")
        sub = all(contains(b, x) for x in pts if contains(a, x))
        if is_subset(a, b) != sub:
            res.fail(f"subset test wrong for {a} in {b}")
        if not is_subset(interval_interior(a), a):
            res.fail(f"interior of {a} escapes it")
        m = _random_matrix(rng)
        ma = map_interval(m, a)
        if any(contains(ma, lft_apply(m, x)) != contains(a, x) for x in pts):
            res.fail(f"image of {a} under {m.rows()} is not pointwise")


def _random_matrix(rng: random.Random) -> IntMatrix2:
    while True:
        a, b, c, d = (rng.randint(-5, 5) for _ in range(4))
        if a * d - b * c in (1, -1):
            return IntMatrix2(a, b, c, d)


def suite_intervals(rng: random.Random, res: SuiteResult) -> None:
    _interval_laws(rng, res, interval_complement)


def _broken_complement(i: SlopeInterval) -> SlopeInterval:
    # keeps the closedness flags instead of flipping them
    if isinstance(i, Arc):
        return Arc(i.hi, i.lo, i.hi_closed, i.lo_closed)
    return interval_complement(i)


def suite_negative_control(rng: random.Random, res: SuiteResult) -> None:
    _interval_laws(rng, res, _broken_complement)


def _trees_and_states(rng: random.Random, count: int):
    for _ in range(count):
        t = random_tree(rng)
        if validate_tree(t):
            continue
        a = random_assignment(rng, t, p_inf=0.0)
        yield t, a


def suite_shifted_endpoints(rng: random.Random, res: SuiteResult) -> None:
    for t, a in _trees_and_states(rng, 1500):
        for v in t.vertices:
            try:
                st = vertex_interval(t, v, a)
                yb = ybar_from_state(t, st)
            except (ValueError, UnclassifiedStructureCase):
                continue
            try:
                yd = ybar_direct(t, st, period_limit=300)
            except PeriodCapExceeded:
                continue
            res.cases += 1
            if yb != yd:
                res.fail(f"vertex {v} of {t.vertices[v]} at {_fmt(a)}: {yb} vs {yd}")


def suite_endpoint_bounds(rng: random.Random, res: SuiteResult) -> None:
    for t, a in _trees_and_states(rng, 1500):
        for v in t.vertices:
            try:
                ok = prop53_bound_check(t, v, a, period_limit=300)
            except (UnclassifiedStructureCase, PeriodCapExceeded):
                continue
            res.cases += 1
            if not ok:
                res.fail(f"vertex {v} at {_fmt(a)}")


def _lambda_shift(rng: random.Random, n: int) -> list[int]:
    l = [rng.randint(-4, 4) for _ in range(n)]
    l[-1] -= sum(l)
    return l


def suite_lambda(rng: random.Random, res: SuiteResult) -> None:
    done = 0
    while done < 40:
        t = random_tree(rng)
        if validate_tree(t):
            continue
        vs = [v for v in t.vertices if len(t.free_indices(v)) >= 2]
        if not vs:
            continue
        done += 1
        a = random_assignment(rng, t)
        try:
            base = is_lspace_filling(t, a).lspace
        except UnclassifiedStructureCase:
            continue
        for _ in range(50):
            v = rng.choice(vs)
            slots = t.free_indices(v)
            b = dict(a)
            for i, l in zip(slots, _lambda_shift(rng, len(slots))):
                s = b[(v, i)]
                b[(v, i)] = s if s.is_inf else as_slope(s.fraction() + l)
            res.cases += 1
            if is_lspace_filling(t, b).lspace != base:
                res.fail(f"shift at {v} changes verdict: {_fmt(a)} vs {_fmt(b)}")
    # the full label of torus-link satellites, except the fundamental-domain flags
    spec = TorusSatelliteSpec(5, 2, 23, 2)
    for _ in range(50):
        y = [random_slope(rng) for _ in range(2)]
        lab = torus_region_label(spec, y, basis="sf")
        l = _lambda_shift(rng, 2)
        z = [s if s.is_inf else as_slope(s.fraction() + d) for s, d in zip(y, l)]
        lab2 = torus_region_label(spec, z, basis="sf")
        res.cases += 1
        keys = ("lspace", "in_R", "in_Z", "in_B", "in_lambda_orbit_of_Lstar")
        if any(getattr(lab, k) != getattr(lab2, k) for k in keys):
            res.fail(f"label changes under shift {l} at {y}")


def suite_mirror(rng: random.Random, res: SuiteResult) -> None:
    for _ in range(1500):
        t = random_tree(rng, unknot=True)
        m = mirror_tree(t)
        if validate_tree(t) or validate_tree(m):
            continue
        a = random_assignment(rng, t)
        b = {k: -s for k, s in a.items()}
        try:
            x = is_lspace_filling(t, a).lspace
            y = is_lspace_filling(m, b).lspace
        except UnclassifiedStructureCase:
            continue
        res.cases += 1
        if x != y:
            res.fail(f"mirror disagrees at {_fmt(a)}")


def suite_inner(rng: random.Random, res: SuiteResult, *, samples: int = 1000) -> None:
    for name in ("algebraic", "iterated_negative"):
        t = NAMED_TREES[name]
        regions = inner_min_regions(t)
        for _ in range(samples):
            a = sample_inner_region(regions, rng)
            res.cases += 1
            if not is_lspace_filling(t, a).lspace:
                res.fail(f"{name}: {_fmt(a)} is not an L-space filling")
            elif not all(monotone_at(t, v, a) for v in t.vertices):
                res.fail(f"{name}: {_fmt(a)} is outside the monotone stratum")


def suite_structure(rng: random.Random, res: SuiteResult) -> None:
    for _ in range(1000):
        finite = [random_slope(rng, p_inf=0.0) for _ in range(rng.randint(0, 3))]
        arcs = []
        for _ in range(rng.randint(0, 2)):
            # wrapped pieces only, so no piece is ordered
            lo = rng.randint(0, 4) + Fraction(rng.randint(0, 3), 4)
            hi = lo - rng.randint(0, 4) - Fraction(rng.randint(1, 3), 4)
            arcs.append(Arc(as_slope(lo), as_slope(hi)))
        n_inf = rng.choice([1, 2, 3])
        inp = FiberExteriorInput.build(finite + [INF] * n_inf, arcs)
        iv = fiber_exterior_interval(inp).interval
        res.cases += 1
        if contains(iv, 0) != (n_inf == 1):
            res.fail(f"{n_inf} fiber slopes with {finite} and {arcs}: {iv}")
    # doubly fibered slopes on satellites of nontrivial L-space knots
    for _ in range(200):
        while True:
            p, q = rng.randint(1, 4), rng.randint(1, 30)
            if math.gcd(p, q) == 1:
                break
        spec = TorusSatelliteSpec(rng.randint(1, 4), p, q, rng.randint(2, 4))
        y = [random_slope(rng) for _ in range(spec.n)]
        y[0] = y[1] = INF
        res.cases += 1
        if is_lspace_filling(spec.tree(), spec.assignment(y)).lspace:
            res.fail(f"{spec} at {y} is an L-space")


def suite_grid(rng: random.Random, res: SuiteResult) -> None:
    t = NAMED_TREES["fig1"]
    cells = raster_region(
        t, (("v1", 1), ("v1", 2)),
        (Fraction(40), Fraction(50), Fraction(40), Fraction(50)), Fraction(1, 2), mode="both",
    )
    for c in cells:
        res.cases += 1
        if c.label is None:
            res.fail(f"cell {c.a1},{c.a2}: {c.error}")
    for _ in range(1500):
        p = rng.randint(1, 4)
        q = rng.choice([x for x in range(-9, 10) if x and math.gcd(p, x) == 1])
        spec = TorusSatelliteSpec(rng.randint(0, 3), p, q, rng.randint(1, 3))
        y = [random_slope(rng) for _ in range(spec.n)]
        try:
            oracle = is_lspace_filling(spec.tree(), spec.assignment(y)).lspace
            sf = torus_lspace_sf(spec, y)
            s3 = torus_lspace_s3(spec, spec.to_s3(y))
        except (NoClosedForm, UnclassifiedStructureCase, PeriodCapExceeded):
            continue
        res.cases += 1
        if not (oracle == sf == s3):
            res.fail(f"{spec} at {y}: oracle {oracle}, sf {sf}, s3 {s3}")


SUITES: dict[str, Callable[[random.Random, SuiteResult], None]] = {
    "lemma46": suite_lemma46,
    "intervals": suite_intervals,
    "shifted_endpoints": suite_shifted_endpoints,
    "endpoint_bounds": suite_endpoint_bounds,
    "lambda": suite_lambda,
    "mirror": suite_mirror,
    "inner": suite_inner,
    "structure": suite_structure,
    "grid": suite_grid,
    "negative_control": suite_negative_control,
}
DEFAULT_SUITES = tuple(n for n in SUITES if n != "negative_control")


def run_suite(name: str, seed: int = DEFAULT_SEED) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    res = SuiteResult(name)
    t0 = time.perf_counter()
    try:
        SUITES[name](random.Random(f"{seed}:{name}"), res)
    except Exception as exc:  # a crash is a failure, not an abort
        res.fail(f"crashed: {type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t0
    return res


def _run_one(args: tuple[str, int]) -> SuiteResult:
    return run_suite(*args)


def run_suites(names: tuple[str, ...] = DEFAULT_SUITES, seed: int = DEFAULT_SEED, jobs: int = 1) -> list[SuiteResult]:
    work = [(n, seed) for n in names]
    if jobs <= 1 or len(work) < 2:
        return [run_suite(n, s) for n, s in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, work))
