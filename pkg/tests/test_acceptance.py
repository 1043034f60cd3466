"""End-to-end acceptance criteria.

Each test records one ``PASS``/``FAIL`` line, printed in the
"acceptance criteria" section at the end of the pytest run, and then asserts.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from acceptance_log import LINES
from lspace.checks import DEFAULT_SEED, run_suite
from lspace.cli import main
from lspace.fixtures import torus_tree
from lspace.regions import (
    TorusSatelliteSpec,
    n_pq,
    psi_inv,
    psi_matrix,
    raster_region,
    topology_classify,
    torus_region_label,
)
from lspace.satellite import is_lspace_filling, slot_interval
from lspace.seifert import FiberExteriorInput, fiber_exterior_interval
from lspace.slopes import INF, Point, closed_arc, contains, map_interval, parse_slope

S = parse_slope
FIG1_TREE = str(Path(__file__).resolve().parent.parent / "trees" / "fig1.json")


def report(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" ({detail})" if detail else "")
    LINES.append(line)
    print(line)
    assert ok, detail


# ---------------------------------------------------------------------------


def test_criterion_1_figure_raster():
    spec = TorusSatelliteSpec(5, 2, 23, 2)
    t0 = time.perf_counter()
    cells = raster_region(
        spec.tree(), (("v1", 1), ("v1", 2)),
        (Fraction(20), Fraction(70), Fraction(20), Fraction(70)), Fraction(1, 2), mode="both",
    )
    elapsed = time.perf_counter() - t0
    unlabelled = [c for c in cells if c.label is None]
    # the oracle verdict against the S^3 orbit description as well
    orbit_bad = [
        c for c in cells
        if c.label is not None and c.label.in_lambda_orbit_of_Lstar not in (None, c.label.lspace)
    ]
    points = {(47, 47): True, (41, 45): True, (46, 10): True, (46, 46): False, (40, 40): False}
    point_bad = [
        a for a, want in points.items()
        if torus_region_label(spec, [S(str(x)) for x in a]).lspace is not want
        or is_lspace_filling(spec.tree(), spec.assignment(spec.to_sf([S(str(x)) for x in a]))).lspace
        is not want
    ]
    ok = (
        len(cells) == 101 * 101 and not unlabelled and not orbit_bad and not point_bad
        and elapsed < 60
    )
    report(
        1, "figure raster matches closed form", ok,
        f"{len(cells)} cells, {len(unlabelled)} disagreements, {len(orbit_bad)} orbit mismatches, "
        f"bad points {point_bad}, {elapsed:.1f}s",
    )


def test_criterion_2_cable_recovery():
    rng = random.Random(f"{DEFAULT_SEED}:cables")
    cases = []
    while len(cases) < 20:
        g, p, q = rng.randint(1, 5), rng.randint(1, 5), rng.randint(1, 40)
        if math.gcd(p, q) == 1 and 2 * g - 1 <= Fraction(q, p):
            cases.append((g, p, q))
    while len(cases) < 30:
        g, p, q = rng.randint(1, 5), rng.randint(2, 5), rng.randint(1, 40)
        if math.gcd(p, q) == 1 and 2 * g - 1 > Fraction(q, p):
            cases.append((g, p, q))
    t0 = time.perf_counter()
    bad = []
    for g, p, q in cases:
        t = torus_tree(g, p, q, 1)
        region = map_interval(psi_matrix(p * q), slot_interval(t, {}, 1))
        if 2 * g - 1 <= Fraction(q, p):
            want = closed_arc(n_pq(TorusSatelliteSpec(g, p, q, 1)), "inf")
        else:
            want = Point(INF)
        if region != want:
            bad.append((g, p, q, str(region)))
            continue
        # the region agrees with the per-slope oracle around its endpoint
        edge = n_pq(TorusSatelliteSpec(g, p, q, 1))
        for alpha in range(edge - 3, edge + 4):
            a = {("v1", 1): psi_inv(S(str(alpha)), p * q)}
            if is_lspace_filling(t, a).lspace != contains(region, S(str(alpha))):
                bad.append((g, p, q, alpha))
    elapsed = time.perf_counter() - t0
    report(2, "cable regions", not bad and elapsed < 5, f"{len(cases)} cables, bad {bad[:3]}, {elapsed:.2f}s")


def test_criterion_3_trefoil_fiber_exterior():
    r = fiber_exterior_interval(FiberExteriorInput.build([S("-1/2"), S("2/3")]))
    image = map_interval(psi_matrix(6), r.interval)
    want = closed_arc(1, "inf")
    report(3, "trefoil exterior maps to [1, inf]", image == want and contains(image, INF), str(image))


def _suite_criterion(number, title, name, *, min_cases, budget=None):
    res = run_suite(name)
    ok = res.ok and res.cases >= min_cases and (budget is None or res.seconds < budget)
    detail = f"{res.cases} cases, {res.n_failed} failures, {res.seconds:.2f}s"
    if res.failures:
        detail += f"; first: {res.failures[0]}"
    report(number, title, ok, detail)


def test_criterion_4_coefficient_sweep():
    _suite_criterion(4, "coefficient inequality sweep", "lemma46", min_cases=1, budget=5)


def test_criterion_5_structure_cases():
    _suite_criterion(5, "structure cases", "structure", min_cases=1000)


def test_criterion_6_inner_containment():
    _suite_criterion(6, "inner approximations are L-spaces", "inner", min_cases=2000, budget=30)


@pytest.mark.parametrize(
    "name,min_cases",
    [("lambda", 40 * 50), ("mirror", 1000), ("intervals", 10_000)],
)
def test_criterion_7_symmetries(name, min_cases):
    _suite_criterion(7, f"symmetry suite {name}", name, min_cases=min_cases)


def test_criterion_8_topology():
    cases = [((5, 2, 23, 2), "ii", None), ((5, 1, 8, 4), "i.b", 5), ((1, 2, 1, 3), "i.a", None)]
    bad = []
    for spec, label, rank in cases:
        rep = topology_classify(TorusSatelliteSpec(*spec))
        if rep.case_label != label or (rank is not None and rep.h1_rank != rank):
            bad.append((spec, rep.case_label, rep.h1_rank))
    report(8, "topology classifier", not bad, f"bad {bad}")


def test_criterion_9_determinism(tmp_path, capsys):
    args = ["region", "--tree", FIG1_TREE, "--free", "v1:1,v1:2",
            "--window", "38:52:38:52", "--step", "1/2"]
    outputs = {}
    for fmt in ("csv", "svg"):
        for tag, jobs in (("a", 1), ("b", 1), ("c", 8)):
            out = tmp_path / f"{fmt}-{tag}"
            code = main(args + ["--format", fmt, "--jobs", str(jobs), "--out", str(out)])
            assert code == 0
            outputs[(fmt, tag)] = out.read_bytes()
    capsys.readouterr()
    same = all(outputs[(f, "a")] == outputs[(f, t)] for f in ("csv", "svg") for t in ("b", "c"))
    size = len(outputs[("csv", "a")])
    report(9, "region output is deterministic", same, f"{size} csv bytes, jobs 1 and 8")
