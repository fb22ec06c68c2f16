"""Bisection reductions between approximate difference and ratio maximisation.

An *approximate ratio solver* with factor ``alpha`` returns ``x`` with
``f(x)/g(x) >= alpha * f(x')/g(x')`` for every ``x'``. An *approximate
difference solver* returns ``x`` with ``f(x) - g(x) >= alpha * f(x') - g(x')``
(the factor only multiplies ``f``). Either kind can be turned into the
other up to an additive ``eps`` by bisecting on a shift ``g + c`` or a
scale ``lam * g``; each iteration costs one solver call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import ScaledFunction, SetFunction, ShiftedFunction, SubsetMask, as_bits
from .brute import check_brute_size

__all__ = [
    "RATIO_KIND",
    "DIFFERENCE_KIND",
    "SolverFault",
    "ApproxSolver",
    "BisectionState",
    "ReductionResult",
    "DinkelbachResult",
    "brute_force_solver",
    "greedy_solver",
    "difference_from_ratio",
    "ratio_from_difference",
    "exact_ratio_by_bisection",
    "dinkelbach_ratio",
    "max_iterations",
]

RATIO_KIND = "ratio"
DIFFERENCE_KIND = "diff"

# relative slack when checking a solver's guarantee against known points
_CONTRACT_RTOL = 1e-9


class SolverFault(RuntimeError):
    """The inner solver broke its declared guarantee, or a loop failed to terminate."""


@dataclass(frozen=True)
class ApproxSolver:
    """An inner solver with its declared kind and approximation factor.

    ``solve(f, g)`` returns a :class:`SubsetMask` (or bits) approximately
    maximising ``f/g`` (kind ``"ratio"``) or ``f - g`` (kind ``"diff"``).
    """

    kind: str
    alpha: float
    solve: Callable[[SetFunction, SetFunction], SubsetMask]
    name: str = "custom"

    def __post_init__(self):
        if self.kind not in (RATIO_KIND, DIFFERENCE_KIND):
            raise ValueError(f"solver kind must be 'ratio' or 'diff', got {self.kind!r}")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")

    def __call__(self, f: SetFunction, g: SetFunction) -> int:
        return as_bits(self.solve(f, g), f.n)


def brute_force_solver(kind: str, alpha: float = 1.0) -> ApproxSolver:
    """Exhaustive solver (exact, so valid for any ``alpha <= 1``); ties go to the smallest mask."""

    def solve(f, g):
        n = f.n
        check_brute_size(n)
        best_bits, best_val = 0, None
        for bits in range(1 << n):
            fv, gv = f(bits), g(bits)
            val = fv / gv if kind == RATIO_KIND else fv - gv
            if best_val is None or val > best_val:
                best_bits, best_val = bits, val
        return SubsetMask(n, best_bits)

    return ApproxSolver(kind, alpha, solve, name="brute")


def greedy_solver(kind: str, alpha: float, lazy: bool = False) -> ApproxSolver:
    """Psi-greedy as an inner solver. ``alpha`` is the caller's declared factor.

    For monotone submodular inputs the greedy guarantee gives
    ``alpha = 1 - exp(c_g - 1)`` in the weak sense used here.
    """
    from .greedy import psi_greedy

    def solve(f, g):
        S, _ = psi_greedy(f, g, "ratio" if kind == RATIO_KIND else "diff", lazy=lazy)
        return S

    return ApproxSolver(kind, alpha, solve, name="greedy")


@dataclass
class BisectionState:
    """Snapshot after one bisection step."""

    lo: float
    hi: float
    incumbent: SubsetMask
    iterations: int
    parameter: float
    candidate: SubsetMask
    accepted: bool


@dataclass
class ReductionResult:
    x: SubsetMask
    objective: float
    lower_bound: float
    upper_bound: float
    iterations: int
    solver_calls: int
    history: list[BisectionState] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "x": self.x.elements(),
            "objective": self.objective,
            "iterations": self.iterations,
            "solver_calls": self.solver_calls,
            "certified_lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
        }


def max_iterations(span: float, eps: float) -> int:
    """``ceil(log2(span / eps))`` halvings bring ``span`` below ``eps``."""
    if span <= eps:
        return 0
    return math.ceil(math.log2(span / eps))


def _underflow(lo, hi):
    return hi - lo < 2.0**-50 * max(1.0, abs(hi))


def _extremizers(f, x_f, x_g):
    n = f.n
    x_f = (1 << n) - 1 if x_f is None else as_bits(x_f, n)
    x_g = 0 if x_g is None else as_bits(x_g, n)
    return x_f, x_g


def _check_eps(eps):
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")


def _check_solver(solver, kind):
    if not isinstance(solver, ApproxSolver):
        raise TypeError("solver must be an ApproxSolver")
    if solver.kind != kind:
        raise ValueError(f"expected a {kind!r} solver, got a {solver.kind!r} one")


def _bisect(f, g, solver, eps, lo, hi, x, call, accept, check, objective, callback):
    n = f.n
    history = []
    iterations = 0
    while hi - lo > eps and not _underflow(lo, hi):
        mid = (lo + hi) / 2
        y = call(mid)
        check(mid, y)
        accepted = accept(y, mid)
        if accepted:
            lo, x = mid, y
        else:
            hi = mid
        iterations += 1
        if lo > objective(x):
            raise SolverFault(f"certified lower bound {lo} exceeds the incumbent objective {objective(x)}")
        state = BisectionState(lo, hi, SubsetMask(n, x), iterations, mid, SubsetMask(n, y), accepted)
        history.append(state)
        if callback is not None:
            callback(state)
    return x, lo, hi, iterations, history


def difference_from_ratio(
    solver: ApproxSolver,
    f: SetFunction,
    g: SetFunction,
    eps: float,
    x_f=None,
    x_g=None,
    callback: Optional[Callable[[BisectionState], None]] = None,
) -> ReductionResult:
    """Weak ``alpha``-approximate difference maximisation from a ratio solver.

    Bisects on a shift ``c``: the solver is called on ``(f, g + c)`` and
    ``c`` becomes an upper bound when the returned set has ``f - g <= c``.
    On exit, ``alpha*f(x') - g(x') <= f(x) - g(x) + eps`` for every ``x'``.

    ``x_f`` and ``x_g`` default to the full and empty sets, the maximiser
    of ``f`` and minimiser of ``g`` for monotone functions.
    """
    _check_eps(eps)
    _check_solver(solver, RATIO_KIND)
    x_f, x_g = _extremizers(f, x_f, x_g)
    alpha = solver.alpha
    f_xf, f_xg, g_xg = f(x_f), f(x_g), g(x_g)
    g_xf = g(x_f)
    lo = f_xg - g_xg
    hi = alpha * f_xf - g_xg

    def call(c):
        # c > lo >= f(x_g) - g(x_g), so g + c > f(x_g) >= 0 everywhere
        if not g_xg + c > 0:
            raise SolverFault(f"shifted denominator g + c is not positive (c = {c})")
        return solver(f, ShiftedFunction(g, c))

    def check(c, y):
        got = f(y) / (g(y) + c)
        for fx, gx in ((f_xf, g_xf), (f_xg, g_xg)):
            want = alpha * fx / (gx + c)
            if got < want - _CONTRACT_RTOL * max(1.0, abs(want)):
                raise SolverFault(f"ratio solver returned {got} < alpha * {fx / (gx + c)} on a known point")

    def accept(y, c):
        return f(y) - g(y) > c

    def objective(x):
        return f(x) - g(x)

    x, lo, hi, it, history = _bisect(f, g, solver, eps, lo, hi, x_g, call, accept, check, objective, callback)
    return ReductionResult(SubsetMask(f.n, x), objective(x), lo, hi, it, it, history)


def ratio_from_difference(
    solver: ApproxSolver,
    f: SetFunction,
    g: SetFunction,
    eps: float,
    x_f=None,
    x_g=None,
    callback: Optional[Callable[[BisectionState], None]] = None,
) -> ReductionResult:
    """``alpha``-approximate ratio maximisation from a weak difference solver.

    Bisects on ``lam``: the solver is called on ``(f, lam * g)``. On exit,
    ``alpha*f(x')/g(x') <= f(x)/g(x) + eps`` for every ``x'``. ``g`` must be
    positive.
    """
    _check_eps(eps)
    _check_solver(solver, DIFFERENCE_KIND)
    x_f, x_g = _extremizers(f, x_f, x_g)
    alpha = solver.alpha
    f_xf, f_xg, g_xg = f(x_f), f(x_g), g(x_g)
    g_xf = g(x_f)
    if not g_xg > 0:
        raise ValueError(f"g must be positive, got g(x_g) = {g_xg}")
    lo = f_xg / g_xg
    hi = alpha * f_xf / g_xg

    def call(lam):
        return solver(f, ScaledFunction(g, lam))

    def check(lam, y):
        got = f(y) - lam * g(y)
        for fx, gx in ((f_xf, g_xf), (f_xg, g_xg)):
            want = alpha * fx - lam * gx
            if got < want - _CONTRACT_RTOL * max(1.0, abs(want), abs(fx)):
                raise SolverFault(f"difference solver returned {got} < {want} on a known point")

    def accept(y, lam):
        return f(y) / g(y) > lam

    def objective(x):
        return f(x) / g(x)

    x, lo, hi, it, history = _bisect(f, g, solver, eps, lo, hi, x_g, call, accept, check, objective, callback)
    return ReductionResult(SubsetMask(f.n, x), objective(x), lo, hi, it, it, history)


def exact_ratio_by_bisection(
    solver: ApproxSolver, f: SetFunction, g: SetFunction, eps: float, callback=None
) -> ReductionResult:
    """Ratio maximisation to additive ``eps`` with an exact difference maximiser."""
    if solver.alpha != 1:
        raise ValueError("exact bisection needs an exact (alpha = 1) difference solver")
    return ratio_from_difference(solver, f, g, eps, callback=callback)


@dataclass
class DinkelbachResult:
    x: SubsetMask
    ratio: float
    ratios: list[float]
    solver_calls: int
    final_gap: float
    sets: list[SubsetMask] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "x": self.x.elements(),
            "objective": self.ratio,
            "ratios": list(self.ratios),
            "solver_calls": self.solver_calls,
            "final_gap": self.final_gap,
        }


def dinkelbach_ratio(
    solver: ApproxSolver,
    f: SetFunction,
    g: SetFunction,
    x0=None,
    eps: float = 1e-6,
    x_g=None,
    max_iter: int | None = None,
) -> DinkelbachResult:
    """Parametric (Dinkelbach-style) ratio maximisation.

    Starting from ``lam = f(x0)/g(x0)``, repeatedly maximise ``f - lam*g``
    and move ``lam`` to the ratio of the maximiser. Stops once the maximum
    drops below ``eps * g(x_g)``, which certifies ``lam >= lam* - eps``.
    The ratio sequence is strictly increasing until then; ``sets[k]`` is
    the set whose ratio is ``ratios[k]``.

    Raises
    ------
    SolverFault
        After ``10 * n * ceil(log2(1/eps))`` solver calls without stopping.
    """
    _check_eps(eps)
    _check_solver(solver, DIFFERENCE_KIND)
    n = f.n
    x = 0 if x0 is None else as_bits(x0, n)
    x_g = 0 if x_g is None else as_bits(x_g, n)
    g_xg = g(x_g)
    if not g_xg > 0:
        raise ValueError(f"g must be positive, got g(x_g) = {g_xg}")
    if max_iter is None:
        max_iter = 10 * n * max(1, math.ceil(math.log2(1 / eps)))
    threshold = eps * g_xg
    lam = f(x) / g(x)
    ratios = [lam]
    sets = [SubsetMask(n, x)]
    calls = 0
    while True:
        if calls >= max_iter:
            raise SolverFault(f"no convergence after {calls} solver calls (ratios so far: {ratios[-3:]})")
        y = solver(f, ScaledFunction(g, lam))
        calls += 1
        gap = f(y) - lam * g(y)
        if gap < threshold:
            return DinkelbachResult(SubsetMask(n, x), lam, ratios, calls, gap, sets)
        x = y
        lam = f(y) / g(y)
        ratios.append(lam)
        sets.append(SubsetMask(n, y))
