"""Two-variable objectives ``psi(f(S), g(S))`` combined by the greedy solvers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "Combiner",
    "DomainError",
    "DIFFERENCE",
    "RATIO",
    "DIFF_SQRT",
    "RATIO_SQRT",
    "COMBINERS",
    "get_combiner",
    "evaluate",
    "check_quasiconvex_on_segment",
]


class DomainError(ValueError):
    """An objective was evaluated outside its domain."""


@dataclass(frozen=True)
class Combiner:
    """A named function ``psi(a, b)`` with declared analytic properties.

    ``positive_second`` marks combiners only defined for ``b > 0``.
    """

    name: str
    func: Callable[[float, float], float]
    quasiconvex: bool = False
    nondecreasing_in_first: bool = False
    nonincreasing_in_second: bool = False
    positive_second: bool = False

    def __call__(self, a: float, b: float) -> float:
        if self.positive_second and not b > 0:
            raise DomainError(f"{self.name} requires a positive second argument, got {b}")
        return self.func(a, b)


def _diff_sqrt(a, b):
    if b < 0:
        raise DomainError(f"diff-sqrt requires a non-negative second argument, got {b}")
    return a - math.sqrt(b)


DIFFERENCE = Combiner("diff", lambda a, b: a - b, True, True, True)
RATIO = Combiner("ratio", lambda a, b: a / b, True, True, True, positive_second=True)
DIFF_SQRT = Combiner("diff-sqrt", _diff_sqrt, True, True, True)
RATIO_SQRT = Combiner("ratio-sqrt", lambda a, b: a / math.sqrt(b), True, True, True, positive_second=True)

COMBINERS = {c.name: c for c in (DIFFERENCE, RATIO, DIFF_SQRT, RATIO_SQRT)}


def get_combiner(psi) -> Combiner:
    """Resolve a combiner from its CLI name or pass a :class:`Combiner` through."""
    if isinstance(psi, Combiner):
        return psi
    key = str(psi).lower().replace("_", "-")
    if key not in COMBINERS:
        raise ValueError(f"unknown combiner {psi!r}; choose from {sorted(COMBINERS)}")
    return COMBINERS[key]


def evaluate(psi, fa: float, gb: float) -> float:
    return get_combiner(psi)(fa, gb)


def check_quasiconvex_on_segment(psi, p0, p1, grid: int = 10, rtol: float = 1e-12) -> bool:
    """Sample ``psi`` on the segment ``[p0, p1]`` and test the quasiconvexity bound.

    Returns True iff every sampled point satisfies
    ``psi(t*p1 + (1-t)*p0) <= max(psi(p0), psi(p1))`` up to a relative
    slack ``rtol`` absorbing rounding. This is a necessary condition only.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    psi = psi if callable(psi) and not isinstance(psi, str) else get_combiner(psi)
    (a0, b0), (a1, b1) = p0, p1
    top = max(psi(a0, b0), psi(a1, b1))
    slack = rtol * max(1.0, abs(top))
    for k in range(grid + 1):
        t = k / grid
        if psi((1 - t) * a0 + t * a1, (1 - t) * b0 + t * b1) > top + slack:
            return False
    return True
