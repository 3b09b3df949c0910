"""Symbolic infinite utility streams and finite permutations.

A stream assigns an exact rational to every coordinate t >= 1.  Supported
forms: piecewise-constant over disjoint index sets, rank-fill (a fill value
on a set U and the value m+1 at the m-th element of the complement of U),
and a finitely permuted view of another stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import verdicts
from .indexsets import (
    Compl,
    Finite,
    IndexSet,
    Inter,
    Union,
    count,
    is_finite,
    member,
    periodic_profile,
    provably_disjoint,
)
from .verdicts import RelationVerdict

__all__ = [
    "Stream",
    "Piecewise",
    "RankFill",
    "Permuted",
    "FinitePermutation",
    "StreamError",
    "OverlapError",
    "Undecided",
    "constant",
    "eval_at",
    "prefix",
    "apply_permutation",
    "strict_set",
    "nonstrict_set",
    "weakly_dominates",
    "stream_profile",
    "StreamProfile",
    "DEFAULT_HORIZON",
]

DEFAULT_HORIZON = 5040
_CONSTRUCT_CHECK_BOUND = 5040


class StreamError(ValueError):
    """Raised when a stream constructor invariant is violated."""


class OverlapError(StreamError):
    """Two piecewise clauses matched the same coordinate."""


def _as_fraction(v) -> Fraction:
    if isinstance(v, float):
        raise StreamError("stream values must be exact rationals, not floats")
    return Fraction(v)


@dataclass(frozen=True)
class Piecewise:
    """default value everywhere except on the clause sets (pairwise disjoint)."""

    default: Fraction
    clauses: tuple[tuple[IndexSet, Fraction], ...] = ()

    def __init__(self, default, clauses=()):
        object.__setattr__(self, "default", _as_fraction(default))
        cl = tuple((s, _as_fraction(v)) for s, v in clauses)
        object.__setattr__(self, "clauses", cl)
        for i in range(len(cl)):
            for j in range(i + 1, len(cl)):
                si, sj = cl[i][0], cl[j][0]
                if provably_disjoint(si, sj):
                    continue
                if count(Inter(si, sj), _CONSTRUCT_CHECK_BOUND) > 0:
                    raise OverlapError(
                        f"clauses {i} and {j} overlap below {_CONSTRUCT_CHECK_BOUND}"
                    )
                # Not provably disjoint but no early collision: checked lazily.


@dataclass(frozen=True)
class RankFill:
    """fill value on fill_on; m+1 at the m-th element of the complement.

    The rank rule needs an infinite complement; a provably finite one is
    rejected unless ``truncated`` is set, which marks a finite prefix of an
    infinite construction (the caller tracks the coordinate bound below
    which the truncation is faithful; beyond it the fill value continues).
    """

    fill_on: IndexSet
    fill: Fraction = Fraction(1)
    truncated: bool = False

    def __init__(self, fill_on, fill=Fraction(1), truncated=False):
        object.__setattr__(self, "fill_on", fill_on)
        object.__setattr__(self, "fill", _as_fraction(fill))
        object.__setattr__(self, "truncated", bool(truncated))
        if not truncated and is_finite(Compl(fill_on)) is True:
            raise StreamError("rank-fill needs an infinite complement")


@dataclass(frozen=True)
class FinitePermutation:
    """A bijection of the naturals equal to the identity beyond ``bound``."""

    bound: int
    mapping: tuple[int, ...]

    def __init__(self, bound, mapping):
        m = tuple(mapping)
        if bound < 0 or len(m) != bound:
            raise StreamError(f"mapping must list images of 1..{bound}")
        if sorted(m) != list(range(1, bound + 1)):
            raise StreamError("mapping is not a bijection of [1, bound]")
        object.__setattr__(self, "bound", bound)
        object.__setattr__(self, "mapping", m)

    def __call__(self, t: int) -> int:
        return self.mapping[t - 1] if 1 <= t <= self.bound else t

    @classmethod
    def identity(cls, bound: int = 0) -> "FinitePermutation":
        return cls(bound, tuple(range(1, bound + 1)))

    @classmethod
    def from_pairs(cls, pairs: dict[int, int], bound: int | None = None) -> "FinitePermutation":
        if bound is None:
            bound = max(list(pairs.keys()) + list(pairs.values()), default=0)
        images = list(range(1, bound + 1))
        for src, dst in pairs.items():
            if not (1 <= src <= bound and 1 <= dst <= bound):
                raise StreamError(f"pair {src}->{dst} outside [1, {bound}]")
            images[src - 1] = dst
        return cls(bound, tuple(images))

    @classmethod
    def swap(cls, i: int, j: int) -> "FinitePermutation":
        return cls.from_pairs({i: j, j: i})

    @classmethod
    def cycle(cls, points: list[int], bound: int | None = None) -> "FinitePermutation":
        """points[0] -> points[1] -> ... -> points[-1] -> points[0]."""
        pairs = {points[i]: points[(i + 1) % len(points)] for i in range(len(points))}
        return cls.from_pairs(pairs, bound)

    def inverse(self) -> "FinitePermutation":
        inv = [0] * self.bound
        for i, img in enumerate(self.mapping):
            inv[img - 1] = i + 1
        return FinitePermutation(self.bound, tuple(inv))

    def moved_points(self) -> tuple[int, ...]:
        return tuple(t for t in range(1, self.bound + 1) if self(t) != t)


@dataclass(frozen=True)
class Permuted:
    """The stream t -> base[perm(t)]."""

    base: "Stream"
    perm: FinitePermutation


Stream = Piecewise | RankFill | Permuted


def constant(v) -> Piecewise:
    return Piecewise(v)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def eval_at(x: Stream, t: int) -> Fraction:
    """The exact value of coordinate t >= 1."""
    if t < 1:
        raise StreamError(f"coordinates start at 1, got {t}")
    if isinstance(x, Piecewise):
        hit = None
        for i, (s, v) in enumerate(x.clauses):
            if member(s, t):
                if hit is not None:
                    raise OverlapError(f"clauses {hit[0]} and {i} both contain t={t}")
                hit = (i, v)
        return hit[1] if hit is not None else x.default
    if isinstance(x, RankFill):
        if member(x.fill_on, t):
            return x.fill
        return Fraction(count(Compl(x.fill_on), t) + 1)
    if isinstance(x, Permuted):
        return eval_at(x.base, x.perm(t))
    raise TypeError(f"not a stream: {x!r}")


def prefix(x: Stream, n: int) -> list[Fraction]:
    """Coordinates 1..n as a list."""
    if isinstance(x, RankFill):
        out = []
        rank = 0
        for t in range(1, n + 1):
            if member(x.fill_on, t):
                out.append(x.fill)
            else:
                rank += 1
                out.append(Fraction(rank + 1))
        return out
    return [eval_at(x, t) for t in range(1, n + 1)]


def apply_permutation(x: Stream, perm: FinitePermutation) -> Stream:
    """The stream y with y[t] = x[perm(t)] (identity beyond perm.bound)."""
    if perm.bound == 0:
        return x
    return Permuted(x, perm)


# ---------------------------------------------------------------------------
# Pointwise comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Undecided:
    """A horizon scan in place of a structural answer."""

    witnesses: tuple[int, ...]
    horizon: int


_EMPTY_SET = Finite(())


def _compl(s: IndexSet) -> IndexSet:
    return s.arg if isinstance(s, Compl) else Compl(s)


def _regions(x: Piecewise) -> list[tuple[IndexSet, Fraction]]:
    """Clause regions plus the default region (complement of all clauses)."""
    regs = list(x.clauses)
    rest: IndexSet = _EMPTY_SET
    for s, _ in x.clauses:
        rest = Union(rest, s) if rest != _EMPTY_SET else s
    regs.append((_compl(rest), x.default))
    return regs


_FULL_SET = Compl(_EMPTY_SET)


def _inter2(a: IndexSet, b: IndexSet) -> IndexSet:
    if a == b or b == _FULL_SET:
        return a
    if a == _FULL_SET:
        return b
    return Inter(a, b)


def _region_set(x: Stream, y: Stream, pred, horizon: int):
    if isinstance(x, Piecewise) and isinstance(y, Piecewise):
        parts = [
            _inter2(rx, ry)
            for rx, vx in _regions(x)
            for ry, vy in _regions(y)
            if pred(vx, vy)
        ]
        if not parts:
            return _EMPTY_SET
        out = parts[0]
        for p in parts[1:]:
            out = Union(out, p)
        return out
    wits = tuple(t for t in range(1, horizon + 1) if pred(eval_at(x, t), eval_at(y, t)))
    return Undecided(witnesses=wits, horizon=horizon)


def strict_set(x: Stream, y: Stream, horizon: int = DEFAULT_HORIZON):
    """The symbolic set {t : x[t] > y[t]}, or an Undecided scan report."""
    if x == y:
        return _EMPTY_SET
    return _region_set(x, y, lambda a, b: a > b, horizon)


def nonstrict_set(x: Stream, y: Stream, horizon: int = DEFAULT_HORIZON):
    """The symbolic set {t : x[t] <= y[t]}, or an Undecided scan report."""
    if x == y:
        return Compl(_EMPTY_SET)
    return _region_set(x, y, lambda a, b: a <= b, horizon)


def weakly_dominates(x: Stream, y: Stream, horizon: int = DEFAULT_HORIZON) -> RelationVerdict:
    """Whether x[t] >= y[t] for all t: structural proof, scan counterexample,
    or Undecided at the horizon."""
    if x == y:
        return verdicts.holds(note="streams are structurally equal")
    proof = _weak_dominance_structural(x, y)
    if proof:
        return verdicts.holds(note=proof)
    for t in range(1, horizon + 1):
        if eval_at(x, t) < eval_at(y, t):
            return verdicts.fails(counterexample=t)
    return verdicts.undecided(
        horizon=horizon, note="no counterexample scanned and no structural proof"
    )


def _weak_dominance_structural(x: Stream, y: Stream) -> str | None:
    if isinstance(x, RankFill) and isinstance(y, RankFill):
        if x.fill_on == y.fill_on and x.fill >= y.fill:
            return "same rank structure with a fill gap"
        return None
    if not (isinstance(x, Piecewise) and isinstance(y, Piecewise)):
        return None
    for rx, vx in _regions(x):
        for ry, vy in _regions(y):
            if vx < vy and not provably_disjoint(rx, ry):
                return None
    return "every co-occurring region pair satisfies the value inequality"


# ---------------------------------------------------------------------------
# Eventual periodicity of streams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StreamProfile:
    """For t >= start, value(t) = values[t % period]."""

    period: int
    start: int
    values: tuple[Fraction, ...]

    @property
    def mean(self) -> Fraction:
        return Fraction(sum(self.values), self.period)


def stream_profile(x: Stream) -> StreamProfile | None:
    """An eventually-periodic description of x, when derivable."""
    import math as _math

    if isinstance(x, Piecewise):
        profiles = []
        for s, v in x.clauses:
            p = periodic_profile(s)
            if p is None:
                return None
            profiles.append((p, v))
        period = 1
        start = 1
        for p, _ in profiles:
            period = _math.lcm(period, p.period)
            start = max(start, p.start)
        values = []
        for r in range(period):
            val = x.default
            for p, v in profiles:
                if r % p.period in p.residues:
                    val = v
                    break
            values.append(val)
        return StreamProfile(period=period, start=start, values=tuple(values))
    if isinstance(x, Permuted):
        base = stream_profile(x.base)
        if base is None:
            return None
        return StreamProfile(
            period=base.period,
            start=max(base.start, x.perm.bound + 1),
            values=base.values,
        )
    return None
