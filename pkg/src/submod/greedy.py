"""Psi-greedy: ratio-of-marginals greedy chain with a best-prefix last step.

The chain ``S_0 = {} < S_1 < ... < S_n`` adds, at every step, the element
maximising ``f(i | S) / g(i | S)``. The returned set is the prefix
maximising ``psi(f(S_k), g(S_k))``. The same loop with a cap on ``g``
provides the completions used by the knapsack variant.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import math
from dataclasses import dataclass, field

from .combiners import Combiner, DomainError, get_combiner
from .core import SetFunction, SubsetMask, iter_bits

__all__ = [
    "RatioKey",
    "GreedyStep",
    "GreedyTrace",
    "KnapsackResult",
    "InfeasibleError",
    "psi_greedy",
    "greedy_chain",
    "knapsack_psi_greedy",
    "budget_levels",
]

logger = logging.getLogger(__name__)

_STALE_RTOL = 1e-12


class RatioKey:
    """Priority of a candidate with marginals ``(df, dg)``.

    Pairs are ordered by the ratio ``df / dg`` compared through
    cross-multiplication, so no division happens. ``dg == 0`` with
    ``df > 0`` ranks above every pair with a positive denominator, ``(0, 0)``
    ranks as a zero ratio. Ties go to the larger ``df`` and then to the
    smaller element index. Negative ``dg`` (rounding noise on monotone
    functions) is clamped to zero.

    ``a < b`` means *a has higher priority*, so a :mod:`heapq` min-heap pops
    the best candidate first.
    """

    __slots__ = ("df", "dg", "index", "tier")

    def __init__(self, df: float, dg: float, index: int):
        if dg < 0:
            dg = 0.0
        if dg == 0 and df != 0:
            tier = 2 if df > 0 else 0
        else:
            tier = 1
        self.df = df
        self.dg = dg
        self.index = index
        self.tier = tier

    @classmethod
    def unbounded(cls, index: int) -> "RatioKey":
        key = cls(math.inf, 0.0, index)
        key.tier = 3
        return key

    def compare(self, other: "RatioKey") -> int:
        """Positive if ``self`` has priority over ``other``, zero on a full tie."""
        if self.tier != other.tier:
            return self.tier - other.tier
        if self.tier == 1:
            lhs = self.df * (other.dg or 1.0)
            rhs = other.df * (self.dg or 1.0)
            if lhs != rhs:
                return 1 if lhs > rhs else -1
        if self.df != other.df:
            return 1 if self.df > other.df else -1
        return other.index - self.index

    def __lt__(self, other):
        return self.compare(other) > 0

    def __repr__(self):
        return f"RatioKey(df={self.df}, dg={self.dg}, index={self.index})"


@dataclass(frozen=True)
class GreedyStep:
    k: int
    element: int | None
    f: float
    g: float
    psi: float
    bits: int


@dataclass
class GreedyTrace:
    """The greedy chain with per-prefix values and the chosen prefix index."""

    n: int
    chain: list[GreedyStep]
    selected_k: int
    refreshes: list[int] = field(default_factory=list)
    f_calls: int = 0
    g_calls: int = 0

    @property
    def elements(self) -> list[int]:
        return [s.element for s in self.chain[1:]]

    def subset(self, k: int | None = None) -> SubsetMask:
        k = self.selected_k if k is None else k
        return SubsetMask(self.n, self.chain[k].bits)

    @property
    def value(self) -> float:
        return self.chain[self.selected_k].psi

    def to_dict(self) -> dict:
        return {
            "selected_k": self.selected_k,
            "chain": [
                {"k": s.k, "element": s.element, "f": s.f, "g": s.g, "psi": s.psi} for s in self.chain
            ],
            "refreshes": list(self.refreshes),
        }


def _eager_chain(f, g, bits, f_cur, g_cur, cand, cap):
    steps = []
    while cand:
        best = best_vals = None
        for u in list(iter_bits(cand)):
            nb = bits | (1 << u)
            gv = g(nb)
            if cap is not None and gv > cap:
                # g is monotone: u stays infeasible for every superset
                cand &= ~(1 << u)
                continue
            fv = f(nb)
            key = RatioKey(fv - f_cur, gv - g_cur, u)
            if best is None or key < best:
                best, best_vals = key, (fv, gv)
        if best is None:
            break
        u = best.index
        bits |= 1 << u
        cand &= ~(1 << u)
        f_cur, g_cur = best_vals
        steps.append((u, f_cur, g_cur, bits))
    return steps, []


def _slack(*values) -> float:
    # rounding allowance for marginals recomputed from different base sets
    return _STALE_RTOL * max(abs(v) for v in values)


def _lazy_chain(f, g, bits, f_cur, g_cur, cand, cap):
    # A stored key must upper-bound the element's current priority in the
    # full (ratio, df, -index) order. f marginals only shrink. g marginals
    # are constant for modular g; otherwise the only call-free lower bound
    # is 0. Stale keys are widened by a rounding slack so that near-ties are
    # re-evaluated rather than decided on marginals from an older base set.
    modular_g = g.props.modular
    version = {u: 0 for u in iter_bits(cand)}
    heap = [(RatioKey.unbounded(u), u, 0, -1) for u in iter_bits(cand)]
    heapq.heapify(heap)
    steps, refresh_counts = [], []
    step = 0
    while heap:
        refreshed = []
        vals = {}
        chosen = None
        while heap:
            key, u, ver, fresh_at = heapq.heappop(heap)
            if version.get(u) != ver:
                continue
            if fresh_at == step:
                chosen = u
                break
            nb = bits | (1 << u)
            gv = g(nb)
            if cap is not None and gv > cap:
                # g is monotone: u stays infeasible for every superset
                del version[u]
                continue
            fv = f(nb)
            vals[u] = (fv, gv)
            refreshed.append(u)
            heapq.heappush(heap, (RatioKey(fv - f_cur, gv - g_cur, u), u, ver, step))
        refresh_counts.append(len(refreshed))
        if chosen is None:
            break
        del version[chosen]
        f_prev, g_prev = f_cur, g_cur
        bits |= 1 << chosen
        f_cur, g_cur = vals[chosen]
        steps.append((chosen, f_cur, g_cur, bits))
        for v in refreshed:
            if v not in version:
                continue
            fv, gv = vals[v]
            df = fv - f_prev + _slack(fv, f_prev, f_cur)
            dg = max(0.0, gv - g_prev - _slack(gv, g_prev, g_cur)) if modular_g else 0.0
            version[v] += 1
            heapq.heappush(heap, (RatioKey(df, dg, v), v, version[v], -1))
        step += 1
    return steps, refresh_counts


def greedy_chain(
    f: SetFunction,
    g: SetFunction,
    psi: Combiner | str = "diff",
    *,
    start: int = 0,
    candidates: int | None = None,
    cap: float | None = None,
    lazy: bool = False,
) -> GreedyTrace:
    """Run the greedy loop from ``start`` and score every prefix with ``psi``.

    Parameters
    ----------
    start : int
        Bits of the initial set (``S_0``).
    candidates : int, optional
        Bits of the elements the loop may add; defaults to the complement
        of ``start``.
    cap : float, optional
        Only elements keeping ``g <= cap`` are eligible; the loop stops when
        none is left. The starting set is not checked against ``cap``.
    lazy : bool
        Use lazy (priority-queue) evaluation. The chain is identical to the
        eager one.
    """
    psi = get_combiner(psi)
    n = f.n
    if g.n != n:
        raise ValueError(f"f and g have different ground sets ({n} vs {g.n})")
    full = (1 << n) - 1
    if candidates is None:
        candidates = full & ~start
    candidates &= ~start
    f0_calls, g0_calls = f.eval_count, g.eval_count
    f_cur, g_cur = f(start), g(start)
    if psi.positive_second and not g_cur > 0:
        raise DomainError(f"{psi.name} needs g > 0 on the starting set, got g = {g_cur}")
    run = _lazy_chain if lazy else _eager_chain
    steps, refreshes = run(f, g, start, f_cur, g_cur, candidates, cap)
    chain = [GreedyStep(0, None, f_cur, g_cur, psi(f_cur, g_cur), start)]
    for k, (u, fv, gv, bits) in enumerate(steps, 1):
        chain.append(GreedyStep(k, u, fv, gv, psi(fv, gv), bits))
    best = max(range(len(chain)), key=lambda k: (chain[k].psi, -k))
    return GreedyTrace(
        n=n,
        chain=chain,
        selected_k=best,
        refreshes=refreshes,
        f_calls=f.eval_count - f0_calls,
        g_calls=g.eval_count - g0_calls,
    )


def psi_greedy(
    f: SetFunction, g: SetFunction, psi: Combiner | str = "diff", lazy: bool = False
) -> tuple[SubsetMask, GreedyTrace]:
    """Psi-greedy over the whole ground set.

    ``f`` and ``g`` should be monotone submodular with ``f >= 0``. For
    combiners defined only on ``g > 0`` (ratio family) ``g({})`` must be
    positive. Returns the best prefix and the full trace.
    """
    trace = greedy_chain(f, g, psi, lazy=lazy)
    return trace.subset(), trace


class InfeasibleError(ValueError):
    """No subset satisfies the budget."""


@dataclass
class KnapsackResult:
    selected: SubsetMask
    value: float
    f: float
    g: float
    source: str
    greedy_runs: int
    levels: list[float]

    def to_dict(self) -> dict:
        return {
            "selected": self.selected.elements(),
            "psi": self.value,
            "f": self.f,
            "g": self.g,
            "source": self.source,
            "greedy_runs": self.greedy_runs,
            "levels": len(self.levels),
        }


def budget_levels(budget: float, eps: float) -> list[float]:
    """Caps ``b * eps`` for ``b`` in ``1..floor(B/eps)`` plus ``B`` itself, deduplicated."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if budget < 0:
        raise ValueError(f"budget must be non-negative, got {budget}")
    top = math.floor(budget / eps)
    caps = {min(b * eps, budget) for b in range(1, top + 1)}
    caps.add(budget)
    return sorted(caps)


def knapsack_psi_greedy(
    f: SetFunction,
    g: SetFunction,
    psi: Combiner | str,
    budget: float,
    eps: float,
    lazy: bool = False,
) -> KnapsackResult:
    """Psi-greedy under ``g(S) <= budget`` with partial enumeration.

    Candidates are the best feasible set of size at most two, and, for
    every feasible triple and every cap in :func:`budget_levels`, the best
    prefix of the greedy completion started at the triple and restricted to
    ``g <= cap``. Triples above the cap are skipped. Cost grows as
    ``n**3`` greedy runs per level.

    ``psi`` must be flagged non-decreasing in its first and non-increasing
    in its second argument.
    """
    psi = get_combiner(psi)
    if not (psi.nondecreasing_in_first and psi.nonincreasing_in_second):
        raise ValueError(f"{psi.name} must be non-decreasing in f and non-increasing in g")
    levels = budget_levels(budget, eps)
    n = f.n
    if g.n != n:
        raise ValueError(f"f and g have different ground sets ({n} vs {g.n})")
    g_empty = g(0)
    if g_empty > budget:
        raise InfeasibleError(f"g(empty set) = {g_empty} exceeds the budget {budget}")
    if psi.positive_second and not g_empty > 0:
        raise DomainError(f"{psi.name} needs g > 0, got g(empty set) = {g_empty}")

    best1 = None
    for size in (0, 1, 2):
        for combo in itertools.combinations(range(n), size):
            bits = sum(1 << i for i in combo)
            gv = g(bits)
            if gv > budget:
                continue
            fv = f(bits)
            val = psi(fv, gv)
            if best1 is None or val > best1[0]:
                best1 = (val, bits, fv, gv)

    f_empty = f(0)
    best2 = (psi(f_empty, g_empty), 0, f_empty, g_empty)
    runs = 0
    triples = []
    for combo in itertools.combinations(range(n), 3):
        bits = sum(1 << i for i in combo)
        gv = g(bits)
        if gv <= budget:
            triples.append((bits, gv))
    for cap in levels:
        for bits, gv in triples:
            if gv > cap:
                continue
            trace = greedy_chain(f, g, psi, start=bits, cap=cap, lazy=lazy)
            runs += 1
            step = trace.chain[trace.selected_k]
            if step.psi >= best2[0]:
                best2 = (step.psi, step.bits, step.f, step.g)

    if best1[0] >= best2[0]:
        val, bits, fv, gv = best1
        source = "enumeration"
    else:
        val, bits, fv, gv = best2
        source = "greedy"
    return KnapsackResult(SubsetMask(n, bits), val, fv, gv, source, runs, levels)
