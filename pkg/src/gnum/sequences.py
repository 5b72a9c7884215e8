"""Computable strictly decreasing sequences eps_1 > eps_2 > ... -> 0.

These model characteristic sets S = {eps_j} with 0 in the closure of S:
bump-train schedules, spike/indicator supports, zero sequences of
oscillators, and the materialized-prefix-plus-rule sequences produced by
witness searches.  Every rule is immutable data; ``value(j)`` is a pure
function of the rule and the index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from .errors import DomainError

PI = math.pi


class SequenceRule:
    """Base class.  Indices are 1-based; value(j) is strictly decreasing
    in j with limit 0."""

    def value(self, j: int) -> float:
        raise NotImplementedError

    def index_near(self, eps: float) -> int:
        """Some index j whose value is close to eps (used as a search
        anchor; callers probe j-2 .. j+2)."""
        raise NotImplementedError

    def values(self, n: int):
        return [self.value(j) for j in range(1, n + 1)]

    def gap(self, j: int) -> float:
        return self.value(j) - self.value(j + 1)


@dataclass(frozen=True)
class Geometric(SequenceRule):
    """eps_j = ratio**j, ratio in (0,1)."""

    ratio: Fraction = Fraction(1, 2)

    def __post_init__(self):
        if not (0 < self.ratio < 1):
            raise DomainError(f"geometric ratio must be in (0,1), got {self.ratio}")

    def value(self, j: int) -> float:
        return float(self.ratio) ** j

    def index_near(self, eps: float) -> int:
        r = float(self.ratio)
        return max(1, round(math.log(eps) / math.log(r)))


@dataclass(frozen=True)
class Harmonic(SequenceRule):
    """eps_j = 1/j."""

    def value(self, j: int) -> float:
        return 1.0 / j

    def index_near(self, eps: float) -> int:
        return max(1, round(1.0 / eps))


@dataclass(frozen=True)
class HarmonicMidpoints(SequenceRule):
    """eps_j = (2j+1)/(2j(j+1)), the midpoint of 1/j and 1/(j+1)."""

    def value(self, j: int) -> float:
        return (2 * j + 1) / (2 * j * (j + 1))

    def index_near(self, eps: float) -> int:
        return max(1, round(1.0 / eps))


@dataclass(frozen=True)
class PiSequence(SequenceRule):
    """eps_j = ((mult*j + offset) * pi) ** (-1/power).

    Zeros and extrema of sin/cos(1/eps**power) live on these sequences:
    sin zeros  -> mult=1, offset=0;   sin=+1 -> mult=2, offset=1/2;
    cos zeros  -> mult=1, offset=1/2; cos=+1 -> mult=2, offset=0; etc.
    """

    mult: Fraction = Fraction(1)
    offset: Fraction = Fraction(0)
    power: Fraction = Fraction(1)

    def __post_init__(self):
        if self.mult <= 0 or self.power <= 0:
            raise DomainError("PiSequence needs mult > 0 and power > 0")
        if self.mult * 1 + self.offset <= 0:
            raise DomainError("PiSequence first term must be positive")

    def value(self, j: int) -> float:
        t = (float(self.mult) * j + float(self.offset)) * PI
        return t ** (-1.0 / float(self.power))

    def index_near(self, eps: float) -> int:
        t = eps ** (-float(self.power))
        return max(1, round((t / PI - float(self.offset)) / float(self.mult)))


@dataclass(frozen=True)
class Midpoints(SequenceRule):
    """Midpoints of consecutive points of another rule (lies in the gaps)."""

    of: SequenceRule

    def value(self, j: int) -> float:
        return 0.5 * (self.of.value(j) + self.of.value(j + 1))

    def index_near(self, eps: float) -> int:
        return self.of.index_near(eps)


@dataclass(frozen=True)
class Explicit(SequenceRule):
    """A materialized strictly decreasing prefix, continued by ``tail``.

    The tail rule is rescaled so its first value continues strictly
    below the last explicit point.
    """

    points: Tuple[float, ...]
    tail: Optional[SequenceRule] = None
    _tail_scale: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if not self.points:
            raise DomainError("Explicit sequence needs at least one point")
        pts = self.points
        if any(b >= a for a, b in zip(pts, pts[1:])) or pts[-1] <= 0 or pts[0] > 1:
            raise DomainError("Explicit sequence must be strictly decreasing in (0,1]")
        if self.tail is not None:
            scale = 0.5 * pts[-1] / self.tail.value(1)
            object.__setattr__(self, "_tail_scale", scale)

    def value(self, j: int) -> float:
        n = len(self.points)
        if j <= n:
            return self.points[j - 1]
        if self.tail is None:
            # default geometric continuation below the last point
            return self.points[-1] * 0.5 ** (j - n)
        return self._tail_scale * self.tail.value(j - n)

    def index_near(self, eps: float) -> int:
        pts = self.points
        if eps >= pts[-1]:
            lo, hi = 0, len(pts) - 1
            while lo < hi:
                mid = (lo + hi) // 2
                if pts[mid] >= eps:
                    lo = mid + 1
                else:
                    hi = mid
            return max(1, lo)
        if self.tail is None:
            return len(pts) + max(1, round(math.log(eps / pts[-1]) / math.log(0.5)))
        return len(pts) + self.tail.index_near(eps / self._tail_scale)


# -- lazily searched sequences (witness tails) ------------------------------

_SEARCHERS = {}


def register_searcher(key: str, fn) -> None:
    """Register the pure extension function for Searched rules.

    fn(params, j) -> float must be deterministic in (params, j).
    """
    _SEARCHERS[key] = fn


@dataclass(frozen=True)
class Searched(SequenceRule):
    """Prefix found by a recorded search; tail recomputed on demand by
    the registered searcher (pure in (params, j))."""

    searcher: str
    params: tuple
    points: Tuple[float, ...]

    def value(self, j: int) -> float:
        if j <= len(self.points):
            return self.points[j - 1]
        fn = _SEARCHERS.get(self.searcher)
        if fn is None:
            raise DomainError(f"no searcher registered for {self.searcher!r}")
        return fn(self.params, j)

    def index_near(self, eps: float) -> int:
        for i, p in enumerate(self.points):
            if p <= eps:
                return max(1, i)
        return len(self.points)


def check_decreasing(rule: SequenceRule, n: int = 64) -> bool:
    vals = rule.values(n)
    return all(a > b > 0 for a, b in zip(vals, vals[1:]))
