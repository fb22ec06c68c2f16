"""ModMod: repeatedly maximise a permutation-based modular lower bound minus a modular cost."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import SetFunction, SubsetMask, as_bits, iter_bits
from .validation import check_rng

__all__ = ["ModularLowerBound", "modular_lower_bound", "ModModResult", "modmod"]


@dataclass
class ModularLowerBound:
    """``A -> offset + sum of values[a] for a in A``, tight at ``anchor``.

    ``values[sigma[k]]`` is the marginal gain of ``sigma[k]`` on top of
    ``sigma[:k]``; ``offset`` is ``f({})``.
    """

    permutation: list[int]
    values: np.ndarray
    anchor: SubsetMask
    offset: float

    def __call__(self, A) -> float:
        bits = as_bits(A, len(self.values))
        return self.offset + sum(self.values[i] for i in iter_bits(bits))

    evaluate = __call__


def modular_lower_bound(f: SetFunction, X, rng=None) -> ModularLowerBound:
    """Chain the marginals of ``f`` along a random ordering listing ``X`` first.

    Both the order inside ``X`` and the order of its complement are drawn
    uniformly from ``rng``. For submodular ``f`` the bound is below ``f``
    everywhere and equal to it on ``X``. Uses ``n + 1`` oracle calls.
    """
    rng = check_rng(rng)
    n = f.n
    X_bits = as_bits(X, n)
    inside = np.array(list(iter_bits(X_bits)), dtype=int)
    outside = np.array([i for i in range(n) if not X_bits >> i & 1], dtype=int)
    sigma = np.concatenate([rng.permutation(inside), rng.permutation(outside)]).tolist()
    values = np.zeros(n)
    prev = offset = f(0)
    bits = 0
    for i in sigma:
        bits |= 1 << i
        cur = f(bits)
        values[i] = cur - prev
        prev = cur
    return ModularLowerBound(sigma, values, SubsetMask(n, X_bits), offset)


@dataclass
class ModModResult:
    selected: SubsetMask
    objective: float
    iterations: int
    converged: bool
    sets: list[SubsetMask] = field(default_factory=list)
    objectives: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "selected": self.selected.elements(),
            "objective": self.objective,
            "iterations": self.iterations,
            "converged": self.converged,
            "objectives": list(self.objectives),
        }


def modmod(f: SetFunction, g: SetFunction, rng=None, max_iters: int = 100) -> ModModResult:
    """Modular-modular procedure for ``max f - g`` with modular ``g``.

    Starts from the empty set; each iteration draws a fresh modular lower
    bound of ``f`` anchored at the current set and jumps to the exact
    maximiser of ``bound - g``, i.e. every element whose bound value exceeds
    its cost (strictly). Stops at a fixed point or after ``max_iters``
    iterations and returns the last iterate. ``objectives[0]`` is the value
    of the empty start.
    """
    if not g.props.modular:
        raise ValueError("ModMod needs a modular g (declared via props.modular)")
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    if f.n != g.n:
        raise ValueError(f"f and g have different ground sets ({f.n} vs {g.n})")
    rng = check_rng(rng)
    n = f.n
    g0 = g(0)
    costs = np.array([g(1 << i) - g0 for i in range(n)])

    current = 0
    sets = [SubsetMask(n, 0)]
    objectives = [f(0) - g0]
    converged = False
    it = 0
    while it < max_iters:
        bound = modular_lower_bound(f, current, rng)
        nxt = 0
        for i in np.flatnonzero(bound.values - costs > 0):
            nxt |= 1 << int(i)
        it += 1
        sets.append(SubsetMask(n, nxt))
        objectives.append(f(nxt) - g(nxt))
        if nxt == current:
            converged = True
            break
        current = nxt
    return ModModResult(SubsetMask(n, current), objectives[-1], it, converged, sets, objectives)
