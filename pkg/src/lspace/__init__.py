"""Exact L-space filling decisions for graph-manifold satellites of torus links.

Slopes are exact rationals on the projective line.  Fiber exteriors are
handled by ``seifert``, trees of torus-link pieces by ``satellite``, and
closed-form regions, inner approximations and rasters by ``regions``.
"""

from __future__ import annotations

from .regions import (
    HypothesisError,
    NoClosedForm,
    RegionLabel,
    TorusSatelliteSpec,
    inner_min_regions,
    lo_ctf_regions,
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
from .satellite import (
    LspaceVerdict,
    RouteDisagreement,
    SatelliteTree,
    TreeError,
    is_lspace_filling,
    load_tree,
    parse_assignment,
    slot_interval,
    tree_from_dict,
    validate_tree,
    vertex_interval,
)
from .seifert import (
    FiberExteriorInput,
    PeriodCapExceeded,
    UnclassifiedStructureCase,
    classify_special_slope,
    fiber_exterior_interval,
    lambda_canonicalize,
    pstar_qstar,
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
    contains,
    covers_circle,
    interval_complement,
    map_interval,
    parse_slope,
)

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "Empty",
    "FiberExteriorInput",
    "FullCircle",
    "HypothesisError",
    "INF",
    "IntMatrix2",
    "LongitudeComplement",
    "LspaceVerdict",
    "NoClosedForm",
    "PeriodCapExceeded",
    "Point",
    "RegionLabel",
    "RouteDisagreement",
    "SatelliteTree",
    "Slope",
    "TorusSatelliteSpec",
    "TreeError",
    "UnclassifiedStructureCase",
    "classify_special_slope",
    "contains",
    "covers_circle",
    "fiber_exterior_interval",
    "inner_min_regions",
    "interval_complement",
    "is_lspace_filling",
    "lambda_canonicalize",
    "lo_ctf_regions",
    "load_tree",
    "map_interval",
    "monotone_stratum_member",
    "n_pq",
    "parse_assignment",
    "parse_slope",
    "psi",
    "psi_inv",
    "pstar_qstar",
    "raster_region",
    "sample_inner_region",
    "slot_interval",
    "topology_classify",
    "torus_lspace_s3",
    "torus_lspace_sf",
    "torus_region_label",
    "tree_from_dict",
    "validate_tree",
    "vertex_interval",
]
