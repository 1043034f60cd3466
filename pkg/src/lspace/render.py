"""Serialize raster cells as CSV, SVG or plain PGM.

Every writer is a pure function of the cell list, so identical rasters give
byte-identical files regardless of how the cells were computed.
"""

from __future__ import annotations

from collections.abc import Sequence
from enum import Enum

from .regions import RasterCell
from .slopes import Slope, format_slope

__all__ = ["CellClass", "Palette", "cell_class", "to_csv", "to_svg", "to_pgm", "render"]


class CellClass(Enum):
    NL = "nl"
    L_MINUS = "l_minus"
    L_PLUS = "l_plus"
    R = "r"
    Z = "z"
    ERROR = "error"


class Palette:
    """Fixed fill colours and grey levels, one per cell class."""

    FILL = {
        CellClass.NL: "#ffffff",
        CellClass.L_MINUS: "#555555",
        CellClass.L_PLUS: "#bbbbbb",
        CellClass.R: "#000000",
        CellClass.Z: "#000000",
        CellClass.ERROR: "#ff00ff",
    }
    GREY = {
        CellClass.NL: 255,
        CellClass.L_MINUS: 85,
        CellClass.L_PLUS: 187,
        CellClass.R: 0,
        CellClass.Z: 40,
        CellClass.ERROR: 128,
    }
    Z_MARK = "#ffffff"
    B_STROKE = "#d00000"


def cell_class(cell: RasterCell) -> CellClass:
    lab = cell.label
    if lab is None:
        return CellClass.ERROR
    if lab.in_Z:
        return CellClass.Z
    if lab.in_R:
        return CellClass.R
    if not lab.lspace:
        return CellClass.NL
    return CellClass.L_MINUS if lab.in_L_minus else CellClass.L_PLUS


# ---------------------------------------------------------------------------
# CSV


def to_csv(cells: Sequence[RasterCell]) -> str:
    lines = ["a1,a2,label,flags"]
    for c in cells:
        if c.label is None:
            detail = (c.error or "error").replace(",", ";").replace("\n", " ")
            lines.append(f"{format_slope(c.a1)},{format_slope(c.a2)},ERR,{detail}")
            continue
        label = "L" if c.label.lspace else "NL"
        lines.append(f"{format_slope(c.a1)},{format_slope(c.a2)},{label},{c.label.flags()}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Grid geometry shared by the image writers


def _axes(cells: Sequence[RasterCell]) -> tuple[list[Slope], list[Slope]]:
    xs = sorted({c.a1 for c in cells}, key=_key)
    ys = sorted({c.a2 for c in cells}, key=_key)
    return xs, ys


def _key(s: Slope) -> tuple[int, object]:
    # infinity sorts after every finite value
    return (1, 0) if s.den == 0 else (0, s.fraction())


def to_svg(cells: Sequence[RasterCell], cell_px: int = 8) -> str:
    xs, ys = _axes(cells)
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    w, h = len(xs) * cell_px, len(ys) * cell_px
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}" shape-rendering="crispEdges">',
    ]
    overlay = []
    for c in cells:
        x = xi[c.a1] * cell_px
        y = (len(ys) - 1 - yi[c.a2]) * cell_px
        cls = cell_class(c)
        out.append(
            f'<rect x="{x}" y="{y}" width="{cell_px}" height="{cell_px}" '
            f'fill="{Palette.FILL[cls]}"><title>{format_slope(c.a1)},{format_slope(c.a2)}</title></rect>'
        )
        if cls is CellClass.Z:
            m = max(1, cell_px // 4)
            out.append(
                f'<rect x="{x + m}" y="{y + m}" width="{cell_px - 2 * m}" '
                f'height="{cell_px - 2 * m}" fill="{Palette.Z_MARK}"/>'
            )
        if c.label is not None and c.label.in_B:
            overlay.append(
                f'<rect x="{x + 0.5}" y="{y + 0.5}" width="{cell_px - 1}" height="{cell_px - 1}" '
                f'fill="none" stroke="{Palette.B_STROKE}" stroke-width="1" stroke-dasharray="1,1"/>'
            )
    out.extend(overlay)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def to_pgm(cells: Sequence[RasterCell]) -> str:
    xs, ys = _axes(cells)
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    grid = [[255] * len(xs) for _ in ys]
    for c in cells:
        grid[len(ys) - 1 - yi[c.a2]][xi[c.a1]] = Palette.GREY[cell_class(c)]
    lines = ["P2", f"{len(xs)} {len(ys)}", "255"]
    lines.extend(" ".join(str(v) for v in row) for row in grid)
    return "\n".join(lines) + "\n"


def render(cells: Sequence[RasterCell], fmt: str) -> str:
    if fmt == "csv":
        return to_csv(cells)
    if fmt == "svg":
        return to_svg(cells)
    if fmt == "pgm":
        return to_pgm(cells)
    raise ValueError(f"unknown format {fmt!r}")
