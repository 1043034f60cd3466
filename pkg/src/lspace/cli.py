"""Command-line front end.

Exit codes: 0 for an L-space verdict or success, 1 for a non-L-space verdict
or a failed check, 2 for any error.
"""

from __future__ import annotations

import argparse
import os
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .checks import DEFAULT_SEED, DEFAULT_SUITES, SUITES, run_suites
from .regions import (
    HypothesisError,
    NoClosedForm,
    TorusSatelliteSpec,
    lo_ctf_regions,
    monotone_at,
    psi_inv,
    raster_region,
    topology_classify,
    torus_region_label,
)
from .render import render
from .satellite import (
    GluingHypothesesUnmet,
    RouteDisagreement,
    SatelliteTree,
    TreeError,
    is_lspace_filling,
    load_tree,
    parse_assignment,
    validate_tree,
)
from .seifert import PeriodCapExceeded, UnclassifiedStructureCase, classify_special_slope
from .slopes import Slope, format_slope, parse_slope

__all__ = ["CliConfig", "main", "build_parser"]

EXIT_L = 0
EXIT_NL = 1
EXIT_ERROR = 2

_ERRORS = (
    TreeError,
    ValueError,
    KeyError,
    OSError,
    PeriodCapExceeded,
    UnclassifiedStructureCase,
    RouteDisagreement,
    GluingHypothesesUnmet,
    NoClosedForm,
    HypothesisError,
)


@dataclass(frozen=True, slots=True)
class CliConfig:
    subcommand: str
    tree_path: str | None = None
    slopes: str | None = None
    basis: str = "sf"
    free: str | None = None
    pins: str | None = None
    window: str | None = None
    step: str | None = None
    fmt: str = "csv"
    out: str | None = None
    mode: str = "oracle"
    monotone: bool = False
    jobs: int = 1
    suites: tuple[str, ...] = ()
    seed: int = DEFAULT_SEED
    torus: tuple[int, int, int, int] | None = None
    period_cap: int | None = None


# ---------------------------------------------------------------------------
# Argument helpers


def _slot(text: str) -> tuple[str, int]:
    vid, sep, idx = text.strip().partition(":")
    if not sep:
        raise ValueError(f"slot {text!r} must look like v:i")
    return vid, int(idx)


def _fraction(text: str) -> Fraction:
    s = parse_slope(text)
    if s.is_inf:
        raise ValueError("window and step values must be finite")
    return s.fraction()


def _single_vertex_spec(t: SatelliteTree) -> TorusSatelliteSpec | None:
    if len(t.vertices) != 1 or t.companion.kind not in ("unknot", "lspace_knot"):
        return None
    v = t.vertices[t.root]
    genus = t.companion.genus if t.companion.kind == "lspace_knot" else 0
    return TorusSatelliteSpec(genus, v.p, v.q, v.n)


def _assignment(t: SatelliteTree, text: str, basis: str) -> dict[tuple[str, int], Slope]:
    """Either ``v:i=a/b,...`` or bare values listed in slot order."""
    if "=" in text:
        a = parse_assignment(text)
    else:
        vals = [parse_slope(x) for x in text.split(",") if x.strip()]
        slots = t.slots()
        if len(vals) != len(slots):
            raise ValueError(f"expected {len(slots)} slopes, got {len(vals)}")
        a = dict(zip(slots, vals))
    if basis == "s3":
        a = {k: psi_inv(s, t.vertices[k[0]].p * t.vertices[k[0]].q) for k, s in a.items()}
    elif basis != "sf":
        raise ValueError(f"unknown basis {basis!r}")
    return a


# ---------------------------------------------------------------------------
# Commands


def cmd_validate(cfg: CliConfig) -> int:
    t = load_tree(cfg.tree_path)
    diags = validate_tree(t)
    if diags:
        for d in diags:
            print(d, file=sys.stderr)
        return EXIT_ERROR
    print(f"ok: {len(t.vertices)} vertices, {len(t.edges)} edges, slots "
          + " ".join(f"{v}:{i}" for v, i in t.slots()))
    return 0


def cmd_query(cfg: CliConfig) -> int:
    t = load_tree(cfg.tree_path)
    diags = validate_tree(t)
    if diags:
        raise TreeError(diags)
    a = _assignment(t, cfg.slopes or "", cfg.basis)
    verdict = is_lspace_filling(t, a)
    flags = None
    spec = _single_vertex_spec(t)
    if spec is not None:
        y = [a[(t.root, i)] for i in range(1, spec.n + 1)]
        try:
            flags = torus_region_label(spec, y, basis="sf").flags().split()
        except NoClosedForm:
            flags = None
    if flags is None:
        flags = []
        vecs = [[a[(v, i)] for i in t.free_indices(v)] for v in t.vertices]
        if any(classify_special_slope(vec).in_R for vec in vecs):
            flags.append("R")
        if any(classify_special_slope(vec).in_Z for vec in vecs):
            flags.append("Z")
    if verdict.lspace and all(monotone_at(t, v, a) for v in t.vertices):
        if "MONO" not in flags:
            flags.append("MONO")
    print("L" if verdict.lspace else "NL")
    print(f"root interval: {verdict.root_interval}")
    print(f"root state: {'BC' if verdict.root_state.is_bc else 'BI'}")
    print("sf slopes: " + ",".join(f"{v}:{i}={format_slope(s)}" for (v, i), s in sorted(a.items())))
    print(f"flags: {' '.join(flags)}")
    return EXIT_L if verdict.lspace else EXIT_NL


def cmd_region(cfg: CliConfig) -> int:
    t = load_tree(cfg.tree_path)
    if not cfg.free:
        raise ValueError("--free needs two slots v:i,v:j")
    parts = [p for p in cfg.free.split(",") if p.strip()]
    if len(parts) != 2:
        raise ValueError("--free needs exactly two slots")
    free = (_slot(parts[0]), _slot(parts[1]))
    pins = _assignment(t, cfg.pins, cfg.basis) if cfg.pins else {}
    if not cfg.window or not cfg.step:
        raise ValueError("--window and --step are required")
    bounds = cfg.window.split(":")
    if len(bounds) != 4:
        raise ValueError("--window must be x0:x1:y0:y1")
    x0, x1, y0, y1 = (_fraction(b) for b in bounds)
    step = _fraction(cfg.step)
    cells = raster_region(
        t, free, (x0, x1, y0, y1), step,
        pins=pins, basis=cfg.basis, mode=cfg.mode, monotone=cfg.monotone, jobs=cfg.jobs,
    )
    text = render(cells, cfg.fmt)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    bad = [c for c in cells if c.label is None]
    if bad:
        print(f"{len(bad)} cells could not be labelled", file=sys.stderr)
        return EXIT_ERROR
    return 0


def cmd_check(cfg: CliConfig) -> int:
    names = cfg.suites or DEFAULT_SUITES
    for n in names:
        if n not in SUITES:
            raise ValueError(f"unknown suite {n!r}; choose from {', '.join(SUITES)}")
    failed = 0
    for res in run_suites(tuple(names), cfg.seed, cfg.jobs):
        status = "PASS" if res.ok else "FAIL"
        print(f"{status} {res.name}: {res.cases} cases, {res.n_failed} failures ({res.seconds:.2f}s)")
        for f in res.failures:
            print(f"    {f}")
        failed += not res.ok
    print(f"seed {cfg.seed}: {len(names) - failed}/{len(names)} suites passed")
    return 1 if failed else 0


def cmd_topology(cfg: CliConfig) -> int:
    if cfg.torus is not None:
        spec = TorusSatelliteSpec(*cfg.torus)
    else:
        t = load_tree(cfg.tree_path)
        spec = _single_vertex_spec(t)
        if spec is None:
            raise ValueError("topology needs a single-vertex torus-link tree")
    rep = topology_classify(spec)
    print(f"case: {rep.case_label}")
    print(f"retracts onto: {rep.retract}")
    if rep.h1_rank is not None:
        print(f"h1 rank: {rep.h1_rank}")
    if rep.dimension is not None:
        print(f"dimension: {rep.dimension}")
    if rep.epsilon_generators is not None:
        print(f"generators: {rep.epsilon_generators}")
    try:
        print(f"lo/ctf regions: {lo_ctf_regions(spec).status}")
    except HypothesisError as exc:
        print(f"lo/ctf regions: unavailable ({exc})")
    return 0


_COMMANDS = {
    "validate": cmd_validate,
    "query": cmd_query,
    "region": cmd_region,
    "check": cmd_check,
    "topology": cmd_topology,
}


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lspace", description="L-space fillings of satellite trees.")
    ap.add_argument("--period-cap", type=int, default=None,
                    help="override the k-period cap (same as LSPACE_PERIOD_CAP)")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("validate", help="check a tree file")
    p.add_argument("--tree", required=True)

    p = sub.add_parser("query", help="decide one filling")
    p.add_argument("--tree", required=True)
    p.add_argument("--slope", required=True, help='"v:i=a/b,..." or values in slot order')
    p.add_argument("--basis", choices=("sf", "s3"), default="sf")

    p = sub.add_parser("region", help="rasterize a 2-D slice")
    p.add_argument("--tree", required=True)
    p.add_argument("--free", required=True, help="v:i,v:j")
    p.add_argument("--pin", default=None, help='"v:k=a/b,..." for every other slot')
    p.add_argument("--window", required=True, help="x0:x1:y0:y1")
    p.add_argument("--step", required=True, help="a/b")
    p.add_argument("--basis", choices=("sf", "s3"), default="s3")
    p.add_argument("--format", dest="fmt", choices=("csv", "svg", "pgm"), default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--mode", choices=("oracle", "closed", "both"), default="oracle")
    p.add_argument("--monotone", action="store_true", help="add the MONO flag")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("check", help="run cross-validation suites")
    p.add_argument("--suite", action="append", default=None, choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("topology", help="classify a torus-link satellite region")
    p.add_argument("--tree", default=None)
    p.add_argument("--torus", default=None, metavar="g,p,q,n")
    return ap


def _config(ns: argparse.Namespace) -> CliConfig:
    torus = None
    if getattr(ns, "torus", None):
        parts = [int(x) for x in ns.torus.split(",")]
        if len(parts) != 4:
            raise ValueError("--torus needs g,p,q,n")
        torus = tuple(parts)
    return CliConfig(
        subcommand=ns.subcommand,
        tree_path=getattr(ns, "tree", None),
        slopes=getattr(ns, "slope", None),
        basis=getattr(ns, "basis", "sf"),
        free=getattr(ns, "free", None),
        pins=getattr(ns, "pin", None),
        window=getattr(ns, "window", None),
        step=getattr(ns, "step", None),
        fmt=getattr(ns, "fmt", "csv"),
        out=getattr(ns, "out", None),
        mode=getattr(ns, "mode", "oracle"),
        monotone=getattr(ns, "monotone", False),
        jobs=getattr(ns, "jobs", 1),
        suites=tuple(getattr(ns, "suite", None) or ()),
        seed=getattr(ns, "seed", DEFAULT_SEED),
        torus=torus,
        period_cap=ns.period_cap,
    )


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = _config(ns)
        if cfg.period_cap is not None:
            if cfg.period_cap < 1:
                raise ValueError("--period-cap must be positive")
            os.environ["LSPACE_PERIOD_CAP"] = str(cfg.period_cap)
        if cfg.tree_path is None and cfg.subcommand == "topology" and cfg.torus is None:
            raise ValueError("topology needs --tree or --torus")
        return _COMMANDS[cfg.subcommand](cfg)
    except _ERRORS as exc:
        diags = getattr(exc, "diagnostics", None)
        if diags:
            for d in diags:
                print(f"error: {d}", file=sys.stderr)
        else:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
