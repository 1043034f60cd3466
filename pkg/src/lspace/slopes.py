"""Exact slopes on the projective line and circular interval algebra.

A slope is a point of Q u {inf}, stored as a reduced integer pair with a
non-negative denominator.  Intervals live on the circle obtained by
compactifying Q at infinity; arcs are traversed counterclockwise, that is
in the direction of increasing slope, wrapping through infinity.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "Slope",
    "INF",
    "ZERO",
    "SlopeLike",
    "as_slope",
    "parse_slope",
    "format_slope",
    "frac",
    "residue",
    "IntMatrix2",
    "lft_apply",
    "Empty",
    "FullCircle",
    "Point",
    "LongitudeComplement",
    "Arc",
    "SlopeInterval",
    "closed_arc",
    "interval_interior",
    "interval_complement",
    "contains",
    "is_subset",
    "covers_circle",
    "map_interval",
]


# ---------------------------------------------------------------------------
# Slopes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Slope:
    """A reduced pair ``num/den`` with ``den >= 0``; ``1/0`` is infinity."""

    num: int
    den: int

    def __post_init__(self) -> None:
        num, den = self.num, self.den
        if num == 0 and den == 0:
            raise ValueError("0/0 is not a slope")
        if den < 0:
            num, den = -num, -den
        if den == 0:
            num = 1
        else:
            g = math.gcd(num, den)
            num, den = num // g, den // g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def of(cls, x: "SlopeLike") -> "Slope":
        return as_slope(x)

    @property
    def is_inf(self) -> bool:
        return self.den == 0

    def fraction(self) -> Fraction:
        if self.den == 0:
            raise ValueError("infinite slope has no rational value")
        return Fraction(self.num, self.den)

    def __neg__(self) -> "Slope":
        return self if self.den == 0 else Slope(-self.num, self.den)

    def __str__(self) -> str:
        return format_slope(self)

    def __repr__(self) -> str:
        return f"Slope({format_slope(self)})"


SlopeLike = Union[Slope, Fraction, int, str]

INF = Slope(1, 0)
ZERO = Slope(0, 1)

_SLOPE_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*([+-]?\d+))?\s*$")


def parse_slope(text: str) -> Slope:
    """Parse ``"a/b"``, ``"a"`` or ``"inf"``; raise ``ValueError`` otherwise."""
    t = text.strip()
    if t.lower() in ("inf", "+inf", "-inf", "infinity"):
        return INF
    m = _SLOPE_RE.match(t)
    if m is None:
        raise ValueError(f"malformed slope {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    return Slope(num, den)


def format_slope(s: Slope) -> str:
    if s.den == 0:
        return "inf"
    if s.den == 1:
        return str(s.num)
    return f"{s.num}/{s.den}"


def as_slope(x: SlopeLike) -> Slope:
    if isinstance(x, Slope):
        return x
    if isinstance(x, str):
        return parse_slope(x)
    if isinstance(x, bool):
        raise TypeError("bool is not a slope")
    if isinstance(x, int):
        return Slope(x, 1)
    if isinstance(x, Fraction):
        return Slope(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as a slope")


def frac(x: Fraction) -> Fraction:
    """Fractional part ``[x]`` in ``[0, 1)``."""
    return x - math.floor(x)


def residue(a: int, b: int) -> int:
    """``[a]_b = a - |b| * floor(a / |b|)``, in ``[0, |b|)``."""
    if b == 0:
        raise ZeroDivisionError("residue modulo 0")
    return a % abs(b)


def _cmp_finite(x: Slope, y: Slope) -> int:
    # sign of x - y via the 2x2 determinant x.num*y.den - y.num*x.den
    d = x.num * y.den - y.num * x.den
    return (d > 0) - (d < 0)


def _lin_cmp(x: Slope, y: Slope) -> int:
    """Linear order on the circle cut open at infinity (infinity on top)."""
    if x.is_inf or y.is_inf:
        return int(x.is_inf) - int(y.is_inf)
    return _cmp_finite(x, y)


def _strictly_between(a: Slope, x: Slope, b: Slope) -> bool:
    """True iff ``x`` lies on the open counterclockwise arc from a to b."""
    ab, ax, xb = _lin_cmp(a, b), _lin_cmp(a, x), _lin_cmp(x, b)
    if ab < 0:
        return ax < 0 and xb < 0
    if ab > 0:
        return ax < 0 or xb < 0
    return x != a


# ---------------------------------------------------------------------------
# Linear fractional maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class IntMatrix2:
    """Integer matrix ``[[a, b], [c, d]]`` with determinant +-1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if abs(self.det) != 1:
            raise ValueError(f"determinant {self.det} is not +-1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "IntMatrix2":
        e = self.det
        return IntMatrix2(e * self.d, -e * self.b, -e * self.c, e * self.a)

    def __call__(self, s: SlopeLike) -> Slope:
        return lft_apply(self, as_slope(s))

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))


IDENTITY = IntMatrix2(1, 0, 0, 1)


def lft_apply(m: IntMatrix2, s: Slope) -> Slope:
    return Slope(m.a * s.num + m.b * s.den, m.c * s.num + m.d * s.den)


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Empty:
    def __str__(self) -> str:
        return "empty"


@dataclass(frozen=True, slots=True)
class FullCircle:
    def __str__(self) -> str:
        return "circle"


@dataclass(frozen=True, slots=True)
class Point:
    slope: Slope

    def __str__(self) -> str:
        return f"{{{self.slope}}}"


@dataclass(frozen=True, slots=True)
class LongitudeComplement:
    """Every slope except ``longitude``."""

    longitude: Slope

    def __str__(self) -> str:
        return f"[[{self.longitude},{self.longitude}]]"


@dataclass(frozen=True, slots=True)
class Arc:
    lo: Slope
    hi: Slope
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        if self.lo == self.hi:
            raise ValueError("degenerate arc; use Point or LongitudeComplement")

    @property
    def wraps(self) -> bool:
        """Whether the arc passes through infinity in its interior."""
        return _strictly_between(self.lo, INF, self.hi)

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo},{self.hi}{right}"


SlopeInterval = Union[Empty, FullCircle, Point, LongitudeComplement, Arc]


def closed_arc(lo: SlopeLike, hi: SlopeLike) -> SlopeInterval:
    """The closed interval ``[[lo, hi]]``, which degenerates when lo = hi."""
    lo_s, hi_s = as_slope(lo), as_slope(hi)
    if lo_s == hi_s:
        return LongitudeComplement(lo_s)
    return Arc(lo_s, hi_s, True, True)


def interval_interior(i: SlopeInterval) -> SlopeInterval:
    if isinstance(i, (Empty, Point)):
        return Empty()
    if isinstance(i, Arc):
        return Arc(i.lo, i.hi, False, False)
    return i


def interval_complement(i: SlopeInterval) -> SlopeInterval:
    if isinstance(i, Empty):
        return FullCircle()
    if isinstance(i, FullCircle):
        return Empty()
    if isinstance(i, Point):
        return LongitudeComplement(i.slope)
    if isinstance(i, LongitudeComplement):
        return Point(i.longitude)
    return Arc(i.hi, i.lo, not i.hi_closed, not i.lo_closed)


def contains(i: SlopeInterval, s: SlopeLike) -> bool:
    x = as_slope(s)
    if isinstance(i, Empty):
        return False
    if isinstance(i, FullCircle):
        return True
    if isinstance(i, Point):
        return x == i.slope
    if isinstance(i, LongitudeComplement):
        return x != i.longitude
    if x == i.lo:
        return i.lo_closed
    if x == i.hi:
        return i.hi_closed
    return _strictly_between(i.lo, x, i.hi)


def _inner_point(arc: Arc) -> Slope:
    """Some slope strictly inside ``arc``."""
    lo, hi = arc.lo, arc.hi
    if lo.is_inf:
        return as_slope(hi.fraction() - 1)
    if hi.is_inf:
        return as_slope(lo.fraction() + 1)
    a, b = lo.fraction(), hi.fraction()
    if a < b:
        return as_slope((a + b) / 2)
    return as_slope(a + 1)


def is_subset(a: SlopeInterval, b: SlopeInterval) -> bool:
    """Exact inclusion test ``a ⊆ b`` by endpoint case analysis."""
    if isinstance(a, Empty) or isinstance(b, FullCircle):
        return True
    if isinstance(a, FullCircle):
        return False
    if isinstance(a, Point):
        return contains(b, a.slope)
    if isinstance(a, LongitudeComplement):
        return isinstance(b, LongitudeComplement) and b.longitude == a.longitude
    # a is an Arc from here on.
    if isinstance(b, (Empty, Point)):
        return False
    if isinstance(b, LongitudeComplement):
        return not contains(a, b.longitude)
    if not contains(b, a.lo) and not (not a.lo_closed and a.lo == b.lo):
        return False
    if not contains(b, a.hi) and not (not a.hi_closed and a.hi == b.hi):
        return False
    if _strictly_between(a.lo, b.lo, a.hi) or _strictly_between(a.lo, b.hi, a.hi):
        return False
    return contains(b, _inner_point(a))


def covers_circle(i1: SlopeInterval, i2: SlopeInterval) -> bool:
    """Whether ``i1 ∪ i2`` is the whole circle."""
    return is_subset(interval_complement(i1), i2)


def map_interval(m: IntMatrix2, i: SlopeInterval) -> SlopeInterval:
    """Image of an interval under a linear fractional map."""
    if isinstance(i, (Empty, FullCircle)):
        return i
    if isinstance(i, Point):
        return Point(lft_apply(m, i.slope))
    if isinstance(i, LongitudeComplement):
        return LongitudeComplement(lft_apply(m, i.longitude))
    lo, hi = lft_apply(m, i.lo), lft_apply(m, i.hi)
    if m.det > 0:
        return Arc(lo, hi, i.lo_closed, i.hi_closed)
    return Arc(hi, lo, i.hi_closed, i.lo_closed)
