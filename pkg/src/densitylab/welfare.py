"""Representable welfare evaluations of utility streams.

Four evaluators: the Cesàro liminf of partial averages, the discounted
sum, the minimum, and the coordinate liminf.  Values are exact for
eventually-periodic streams; structurally divergent rank-fill streams get
plus-infinity; everything else degrades to a flagged interval estimate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .densities import exact_density
from .indexsets import Compl, is_infinite, provably_empty, provably_nonempty
from .streams import (
    Permuted,
    Piecewise,
    RankFill,
    Stream,
    _regions,
    eval_at,
    stream_profile,
)

__all__ = [
    "SwfValue",
    "SwfError",
    "Ordering",
    "cesaro_liminf",
    "discounted_sum",
    "min_swf",
    "liminf_swf",
    "induced_compare",
    "EVALUATORS",
]


class SwfError(ValueError):
    """Raised when an evaluation precondition fails."""


@dataclass(frozen=True)
class SwfValue:
    """A welfare value: exact rational, +infinity, or a certified interval."""

    kind: str  # "finite" | "plus_infinity" | "interval"
    value: Fraction | None = None
    lo: Fraction | None = None
    hi: Fraction | None = None
    evidence: tuple = ()

    def __post_init__(self):
        if self.kind == "interval" and (self.lo is None or self.hi is None or self.lo > self.hi):
            raise ValueError("interval estimate needs lo <= hi")

    @classmethod
    def finite(cls, v) -> "SwfValue":
        return cls(kind="finite", value=Fraction(v))

    @classmethod
    def plus_infinity(cls) -> "SwfValue":
        return cls(kind="plus_infinity")

    @classmethod
    def interval(cls, lo, hi, evidence=()) -> "SwfValue":
        return cls(kind="interval", lo=Fraction(lo), hi=Fraction(hi), evidence=tuple(evidence))


_ESTIMATE_CHECKPOINTS = (120, 720, 1708, 5040)


def cesaro_liminf(x: Stream) -> SwfValue:
    """liminf of (x_1 + ... + x_n) / n.

    Exact for eventually-periodic streams (the mean over one tail period);
    plus-infinity for rank-fill streams whose complement has exact density
    one, where partial averages grow without bound; otherwise an interval
    estimate from checkpoint partial averages.
    """
    p = stream_profile(x)
    if p is not None:
        return SwfValue.finite(p.mean)
    if isinstance(x, RankFill):
        d = exact_density(Compl(x.fill_on))
        if d == (Fraction(1), Fraction(1)):
            return SwfValue.plus_infinity()
    if isinstance(x, Permuted):
        base = cesaro_liminf(x.base)
        if base.kind != "interval":
            # A finite permutation shifts partial sums by a bounded amount.
            return base
    evidence = []
    total = Fraction(0)
    t = 0
    for n in _ESTIMATE_CHECKPOINTS:
        while t < n:
            t += 1
            total += eval_at(x, t)
        evidence.append((n, total / n))
    tail = [avg for _, avg in evidence[len(evidence) // 2 :]]
    return SwfValue.interval(min(tail), max(tail), evidence)


def _value_bounds(x: Stream):
    """Structural (min, max) bounds on the values of x, or None."""
    if isinstance(x, Piecewise):
        vals = [x.default] + [v for _, v in x.clauses]
        return (min(vals), max(vals))
    if isinstance(x, Permuted):
        return _value_bounds(x.base)
    return None


def discounted_sum(x: Stream, delta: Fraction, tol: Fraction = Fraction(1, 10**9)) -> SwfValue:
    """Sum of delta^(t-1) * x_t.

    Exact closed form for eventually-periodic streams; for other bounded
    streams, an interval of width at most tol from an exact partial sum
    plus exact tail bounds.  Streams without a structural value bound are
    rejected since the series may diverge.
    """
    delta = Fraction(delta)
    tol = Fraction(tol)
    if not (0 < delta < 1):
        raise SwfError(f"discount factor must be in (0, 1), got {delta}")
    if tol <= 0:
        raise SwfError("tolerance must be positive")
    p = stream_profile(x)
    if p is not None:
        head = sum(
            (delta ** (t - 1)) * eval_at(x, t) for t in range(1, p.start)
        )
        cycle = sum(
            (delta ** (p.start - 1 + i)) * p.values[(p.start + i) % p.period]
            for i in range(p.period)
        )
        return SwfValue.finite(head + cycle / (1 - delta**p.period))
    bounds = _value_bounds(x)
    if bounds is None:
        raise SwfError("stream has no structural value bound; series may diverge")
    vmin, vmax = bounds
    scale = delta / (1 - delta)  # tail factor at n: delta^n / (1 - delta), n >= 1
    n = 1
    dn = delta
    while (vmax - vmin) * dn / (1 - delta) > tol:
        n += 1
        dn *= delta
    partial = sum((delta ** (t - 1)) * eval_at(x, t) for t in range(1, n + 1))
    tail_lo = vmin * dn / (1 - delta)
    tail_hi = vmax * dn / (1 - delta)
    return SwfValue.interval(partial + tail_lo, partial + tail_hi, evidence=((n, partial),))


def min_swf(x: Stream) -> SwfValue:
    """The minimum attained value (exact, computed structurally)."""
    if isinstance(x, Permuted):
        return min_swf(x.base)
    if isinstance(x, RankFill):
        if provably_nonempty(x.fill_on):
            return SwfValue.finite(min(x.fill, Fraction(2)))
        if provably_empty(x.fill_on):
            return SwfValue.finite(Fraction(2))
        if x.fill >= 2:
            return SwfValue.finite(Fraction(2))
        raise SwfError("attainment of the fill value is undecided")
    if isinstance(x, Piecewise):
        attained = []
        uncertain = []
        for region, v in _regions(x):
            if provably_nonempty(region):
                attained.append(v)
            elif not provably_empty(region):
                uncertain.append(v)
        if not attained:
            raise SwfError("no region is provably nonempty")
        m = min(attained)
        if any(v < m for v in uncertain):
            raise SwfError("minimum depends on a region with undecided attainment")
        return SwfValue.finite(m)
    raise TypeError(f"not a stream: {x!r}")


def liminf_swf(x: Stream) -> SwfValue:
    """The liminf of the coordinate values (exact, computed structurally)."""
    if isinstance(x, Permuted):
        return liminf_swf(x.base)
    if isinstance(x, RankFill):
        inf = is_infinite(x.fill_on)
        if inf is True:
            return SwfValue.finite(x.fill)
        if inf is False:
            # Only rank values remain eventually, and those grow without bound.
            return SwfValue.plus_infinity()
        raise SwfError("infinitude of the fill set is undecided")
    p = stream_profile(x)
    if p is not None:
        return SwfValue.finite(min(p.values))
    if isinstance(x, Piecewise):
        recurring = []
        uncertain = []
        for region, v in _regions(x):
            inf = is_infinite(region)
            if inf is True:
                recurring.append(v)
            elif inf is None:
                uncertain.append(v)
        if not recurring:
            raise SwfError("no region is provably infinite")
        m = min(recurring)
        if any(v < m for v in uncertain):
            raise SwfError("liminf depends on a region of undecided infinitude")
        return SwfValue.finite(m)
    raise TypeError(f"not a stream: {x!r}")


class Ordering(enum.Enum):
    ABOVE = "above"
    EQUIVALENT = "equivalent"
    BELOW = "below"
    UNDECIDED = "undecided"

    def __str__(self):
        return self.value


EVALUATORS = {
    "cesaro": cesaro_liminf,
    "discounted": discounted_sum,
    "min": min_swf,
    "liminf": liminf_swf,
}


def _as_interval(v: SwfValue):
    if v.kind == "finite":
        return (v.value, v.value)
    if v.kind == "interval":
        return (v.lo, v.hi)
    return None


def induced_compare(which: str, x: Stream, y: Stream, **kwargs) -> Ordering:
    """Order x against y by the welfare values of the named evaluator.

    Overlapping interval estimates, and a pair of divergent values, are
    reported as undecided rather than ranked.
    """
    if which not in EVALUATORS:
        raise SwfError(f"unknown evaluator {which!r}; choose from {sorted(EVALUATORS)}")
    if x == y:
        return Ordering.EQUIVALENT
    evaluator = EVALUATORS[which]
    wx = evaluator(x, **kwargs)
    wy = evaluator(y, **kwargs)
    if wx.kind == "plus_infinity" and wy.kind == "plus_infinity":
        return Ordering.UNDECIDED
    if wx.kind == "plus_infinity":
        return Ordering.ABOVE
    if wy.kind == "plus_infinity":
        return Ordering.BELOW
    ax = _as_interval(wx)
    ay = _as_interval(wy)
    if ax[0] == ax[1] == ay[0] == ay[1]:
        return Ordering.EQUIVALENT
    if ax[0] > ay[1]:
        return Ordering.ABOVE
    if ax[1] < ay[0]:
        return Ordering.BELOW
    return Ordering.UNDECIDED
