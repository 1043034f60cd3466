"""Fiber-exterior L-space intervals of Seifert fibered pieces.

A Seifert piece over a disk is described by the slopes of its filled
boundary components and exceptional fibers, together with the intervals
of any boundary-incompressible pieces glued onto it.  Its L-space
interval at the remaining (fiber-parallel) boundary is ``[[y-, y+]]``::

    y-(k) = -(1/k) (1 + sum floor(y_i k) + sum (ceil(b+_j k) - 1))
    y+(k) = -(1/k) (-1 + sum ceil(y_i k) + sum (floor(b-_j k) + 1))

with ``y- = sup_k y-(k)`` and ``y+ = inf_k y+(k)``.  The extrema are
attained for finite k exactly when the piece is boundary incompressible.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .slopes import (
    INF,
    Arc,
    Empty,
    LongitudeComplement,
    Point,
    Slope,
    SlopeInterval,
    SlopeLike,
    as_slope,
)

__all__ = [
    "DEFAULT_PERIOD_CAP",
    "PeriodCapExceeded",
    "UnclassifiedStructureCase",
    "pstar_qstar",
    "FiberExteriorInput",
    "FiberIntervalResult",
    "y_minus_of_k",
    "y_plus_of_k",
    "extremum_minus",
    "extremum_plus",
    "fiber_exterior_interval",
    "rational_longitude",
    "SpecialSlopeFlags",
    "classify_special_slope",
    "lambda_canonicalize",
    "period_cap",
]

DEFAULT_PERIOD_CAP = 10**6


class PeriodCapExceeded(RuntimeError):
    """The exact k-search would need more steps than the configured cap."""


class UnclassifiedStructureCase(ValueError):
    """Input outside the cases the structure table covers."""


def period_cap() -> int:
    raw = os.environ.get("LSPACE_PERIOD_CAP")
    if raw is None or not raw.strip():
        return DEFAULT_PERIOD_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError("LSPACE_PERIOD_CAP must be positive")
    return cap


def pstar_qstar(p: int, q: int) -> tuple[int, int]:
    """The pair ``(p*, q*)`` with ``p p* - q q* = 1`` and ``0 <= q* < p``."""
    if p <= 0:
        raise ValueError("p must be positive")
    if math.gcd(p, q) != 1:
        raise ValueError(f"p={p} and q={q} are not coprime")
    if p == 1:
        return 1, 0
    q_star = (-pow(q, -1, p)) % p
    p_star, rem = divmod(1 + q * q_star, p)
    assert rem == 0
    return p_star, q_star


# ---------------------------------------------------------------------------
# Inputs and results
# ---------------------------------------------------------------------------


def _bi_endpoints(i: SlopeInterval) -> tuple[Slope, Slope]:
    if isinstance(i, Arc):
        if not (i.lo_closed and i.hi_closed):
            raise ValueError("incompressible-piece intervals must be closed")
        return i.lo, i.hi
    if isinstance(i, LongitudeComplement):
        return i.longitude, i.longitude
    raise TypeError(f"{type(i).__name__} is not a Floer simple interval")


@dataclass(frozen=True, slots=True)
class FiberExteriorInput:
    seifert_slopes: tuple[Slope, ...]
    bi_intervals: tuple[SlopeInterval, ...] = ()

    @classmethod
    def build(
        cls,
        seifert_slopes: Iterable[SlopeLike],
        bi_intervals: Iterable[SlopeInterval] = (),
    ) -> "FiberExteriorInput":
        bis = tuple(bi_intervals)
        for i in bis:
            _bi_endpoints(i)
        return cls(tuple(as_slope(s) for s in seifert_slopes), bis)

    @property
    def minus_endpoints(self) -> tuple[Slope, ...]:
        return tuple(_bi_endpoints(i)[0] for i in self.bi_intervals)

    @property
    def plus_endpoints(self) -> tuple[Slope, ...]:
        return tuple(_bi_endpoints(i)[1] for i in self.bi_intervals)

    def negated(self) -> "FiberExteriorInput":
        """Orientation reversal: every slope and interval is negated."""
        bis: list[SlopeInterval] = []
        for i in self.bi_intervals:
            lo, hi = _bi_endpoints(i)
            bis.append(LongitudeComplement(-lo) if lo == hi else Arc(-hi, -lo))
        return FiberExteriorInput(tuple(-s for s in self.seifert_slopes), tuple(bis))


@dataclass(frozen=True, slots=True)
class FiberIntervalResult:
    interval: SlopeInterval
    y_minus: Slope
    y_plus: Slope
    minus_attained: bool
    plus_attained: bool
    is_bc: bool
    argmax_k: int | None = None
    argmin_k: int | None = None


# ---------------------------------------------------------------------------
# Per-k values
# ---------------------------------------------------------------------------


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def y_minus_of_k(inp: FiberExteriorInput, k: int) -> Slope:
    if k < 1:
        raise ValueError("k must be positive")
    plus = inp.plus_endpoints
    if any(s.is_inf for s in inp.seifert_slopes) or any(s.is_inf for s in plus):
        return INF
    total = 1
    total += sum((s.num * k) // s.den for s in inp.seifert_slopes)
    total += sum(_ceil_div(s.num * k, s.den) - 1 for s in plus)
    return Slope(-total, k)


def y_plus_of_k(inp: FiberExteriorInput, k: int) -> Slope:
    if k < 1:
        raise ValueError("k must be positive")
    minus = inp.minus_endpoints
    if any(s.is_inf for s in inp.seifert_slopes) or any(s.is_inf for s in minus):
        return INF
    total = -1
    total += sum(_ceil_div(s.num * k, s.den) for s in inp.seifert_slopes)
    total += sum((s.num * k) // s.den + 1 for s in minus)
    return Slope(-total, k)


# ---------------------------------------------------------------------------
# Exact extremum search
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class _Extremum:
    value: Fraction
    attained: bool
    k: int | None


@lru_cache(maxsize=1 << 16)
def _sup_search(
    slopes: tuple[tuple[int, int], ...], plus: tuple[tuple[int, int], ...], cap: int
) -> _Extremum:
    """``sup_k -(1 + sum floor(a k/b) + sum(ceil(c k/d) - 1)) / k``.

    Writing the k-th term as ``C + g(k)/k`` with ``C`` the limit as k grows,
    ``g`` is periodic with period ``P`` (lcm of denominators) and bounded
    above by ``m + n - 1`` where m, n count the two kinds of summands.  The
    sup is attained iff ``g(k) >= 0`` for some ``k <= P``; once a positive
    excess ``g(k)/k = e`` is known the search can stop at ``k > (m+n-1)/e``.
    """
    limit = -sum(Fraction(a, b) for a, b in slopes) - sum(Fraction(c, d) for c, d in plus)
    m, n = len(slopes), len(plus)
    if n == 0 and sum(1 for _, b in slopes if b != 1) <= 1:
        # every g(k) = -1 + (one fractional part) < 0
        return _Extremum(limit, False, None)
    period = 1
    for _, b in slopes:
        period = math.lcm(period, b)
    for _, d in plus:
        period = math.lcm(period, d)
    bound = m + n - 1
    best: Fraction | None = None
    best_k: int | None = None
    k = 0
    while k < period:
        k += 1
        if best is not None and best > limit and bound <= (best - limit) * k:
            break
        if k > cap:
            raise PeriodCapExceeded(
                f"k-search needs more than {cap} steps (period {period})"
            )
        total = 1
        for a, b in slopes:
            total += (a * k) // b
        for c, d in plus:
            total += -((-c * k) // d) - 1
        val = Fraction(-total, k)
        if val >= limit and (best is None or val > best):
            best, best_k = val, k
    if best is None:
        return _Extremum(limit, False, None)
    return _Extremum(best, True, best_k)


def _pairs(ss: Iterable[Slope]) -> tuple[tuple[int, int], ...]:
    return tuple((s.num, s.den) for s in ss)


def extremum_minus(inp: FiberExteriorInput) -> tuple[Slope, bool, int | None]:
    """``(y-, attained, argmax k)``; infinite summands give ``(inf, True, None)``."""
    plus = inp.plus_endpoints
    if any(s.is_inf for s in inp.seifert_slopes) or any(s.is_inf for s in plus):
        return INF, True, None
    ext = _sup_search(_pairs(inp.seifert_slopes), _pairs(plus), period_cap())
    return as_slope(ext.value), ext.attained, ext.k


def extremum_plus(inp: FiberExteriorInput) -> tuple[Slope, bool, int | None]:
    """``(y+, attained, argmin k)``, via ``y+(inp) = -y-(-inp)``."""
    val, attained, k = extremum_minus(inp.negated())
    return -val, attained, k


# ---------------------------------------------------------------------------
# Structure classification
# ---------------------------------------------------------------------------


def _lin_less(a: Slope, b: Slope) -> bool:
    return a.fraction() < b.fraction()


def fiber_exterior_interval(inp: FiberExteriorInput) -> FiberIntervalResult:
    """L-space interval of the fiber exterior described by ``inp``."""
    minus = inp.minus_endpoints
    plus = inp.plus_endpoints
    n_inf = sum(1 for s in inp.seifert_slopes if s.is_inf)
    inf_minus = any(s.is_inf for s in minus)
    inf_plus = any(s.is_inf for s in plus)
    n_lt = sum(
        1
        for lo, hi in zip(minus, plus)
        if not lo.is_inf and not hi.is_inf and _lin_less(lo, hi)
    )

    if not (inf_minus or inf_plus):
        if n_inf > 1:
            return FiberIntervalResult(Empty(), INF, INF, False, False, True)
        if n_inf == 1:
            iv: SlopeInterval = LongitudeComplement(INF) if n_lt == 0 else Empty()
            return FiberIntervalResult(iv, INF, INF, False, False, True)
        ym, ma, km = extremum_minus(inp)
        yp, pa, kp = extremum_plus(inp)
        if ma != pa:
            raise UnclassifiedStructureCase(
                "attainment of the two extrema disagrees"
            )
        is_bc = not ma
        if is_bc:
            if ym != yp:
                raise UnclassifiedStructureCase("unattained extrema differ")
            iv = LongitudeComplement(ym)
        elif n_lt == 0:
            if _lin_less(ym, yp):
                raise UnclassifiedStructureCase(
                    f"expected y- >= y+ without ordered pieces, got {ym}, {yp}"
                )
            # equality happens for incompressible pieces such as the twisted
            # I-bundle over the Klein bottle
            iv = LongitudeComplement(ym) if ym == yp else Arc(ym, yp)
        elif n_lt == 1:
            if _lin_less(ym, yp):
                iv = Arc(ym, yp)
            elif ym == yp:
                iv = Point(ym)
            else:
                iv = Empty()
        else:
            iv = Empty()
        return FiberIntervalResult(iv, ym, yp, ma, pa, is_bc, km, kp)

    if inf_minus and inf_plus:
        raise UnclassifiedStructureCase(
            "infinity occurs among both lower and upper piece endpoints"
        )
    if n_lt != 0 or n_inf > 1:
        return FiberIntervalResult(Empty(), INF, INF, True, True, n_inf > 0)
    if n_inf == 1:
        return FiberIntervalResult(LongitudeComplement(INF), INF, INF, False, False, True)
    ym, ma, km = extremum_minus(inp)
    yp, pa, kp = extremum_plus(inp)
    iv = LongitudeComplement(ym) if ym == yp else Arc(ym, yp)
    return FiberIntervalResult(iv, ym, yp, ma, pa, False, km, kp)


# ---------------------------------------------------------------------------
# Longitudes, special slopes, lattice action
# ---------------------------------------------------------------------------


def rational_longitude(seifert_slopes: Iterable[SlopeLike]) -> Slope:
    """``-sum y_i``; any infinite slope gives infinity."""
    ss = [as_slope(s) for s in seifert_slopes]
    if any(s.is_inf for s in ss):
        return INF
    return as_slope(-sum((s.fraction() for s in ss), Fraction(0)))


@dataclass(frozen=True, slots=True)
class SpecialSlopeFlags:
    in_R: bool
    in_Z: bool
    in_R0: bool


def classify_special_slope(
    vec: Sequence[SlopeLike], has_exceptional_fibers: bool = False
) -> SpecialSlopeFlags:
    """Reducible (some inf), exceptional (two or more inf) and false-reducible
    (one inf, one arbitrary finite entry, zeros elsewhere) slope vectors."""
    ss = [as_slope(s) for s in vec]
    n_inf = sum(1 for s in ss if s.is_inf)
    in_r0 = False
    if not has_exceptional_fibers and n_inf == 1 and len(ss) >= 2:
        nonzero = sum(1 for s in ss if not s.is_inf and s.num != 0)
        in_r0 = nonzero <= 1
    return SpecialSlopeFlags(n_inf >= 1, n_inf >= 2, in_r0)


def lambda_canonicalize(vec: Sequence[SlopeLike]) -> tuple[tuple[Slope, ...], tuple[int, ...]]:
    """Split ``vec = rep + shift`` with ``shift`` integral and summing to 0.

    Finite entries keep their fractional parts; the balancing integer goes
    to an infinite entry if there is one (infinity absorbs it), otherwise to
    the last finite entry.
    """
    ss = [as_slope(s) for s in vec]
    shift = [0 if s.is_inf else s.num // s.den for s in ss]
    total = sum(shift)
    if total and ss:
        inf_idx = [i for i, s in enumerate(ss) if s.is_inf]
        if inf_idx:
            shift[inf_idx[0]] -= total
        else:
            shift[-1] -= total
    rep = tuple(
        s if s.is_inf else Slope(s.num - shift[i] * s.den, s.den) for i, s in enumerate(ss)
    )
    return rep, tuple(shift)
