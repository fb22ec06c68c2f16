import math

import pytest

from submod.core import ShiftedFunction
from submod.functions import ModularFunction
from submod.reductions import (
    ApproxSolver,
    SolverFault,
    brute_force_solver,
    difference_from_ratio,
    dinkelbach_ratio,
    exact_ratio_by_bisection,
    greedy_solver,
    max_iterations,
    ratio_from_difference,
)

from randinst import random_pair


def opt_values(f, g):
    vals = [(f.peek(b), g.peek(b)) for b in range(1 << f.n)]
    return max(a - b for a, b in vals), max(a / b for a, b in vals)


def test_brute_solver_examples():
    f = ModularFunction([3, 1, 4])
    g = ModularFunction([2, 2, 1], offset=1)
    assert brute_force_solver("diff")(f, g) == 0b101
    # ratios: {2}: 4/2 = 2, {0,2}: 7/4, {2} wins
    assert brute_force_solver("ratio")(f, g) == 0b100


def test_solver_validation():
    with pytest.raises(ValueError):
        brute_force_solver("sum")
    with pytest.raises(ValueError):
        brute_force_solver("diff", alpha=0)
    f, g = ModularFunction([1]), ModularFunction([1], offset=1)
    with pytest.raises(ValueError):
        difference_from_ratio(brute_force_solver("diff"), f, g, 0.1)
    with pytest.raises(ValueError):
        difference_from_ratio(brute_force_solver("ratio"), f, g, 0.0)
    with pytest.raises(ValueError):
        exact_ratio_by_bisection(brute_force_solver("diff", 0.5), f, g, 0.1)


def test_max_iterations():
    assert max_iterations(1.0, 0.25) == 2
    assert max_iterations(1.0, 0.3) == 2
    assert max_iterations(0.1, 0.25) == 0


@pytest.mark.parametrize("eps", [1e-2, 1e-4])
def test_difference_from_ratio_invariants(eps, rng):
    for _ in range(15):
        n = int(rng.integers(2, 8))
        f, g = random_pair(n, rng)
        best_diff, _ = opt_values(f, g)
        full = (1 << n) - 1
        span = f.peek(full) - f.peek(0)

        def check(state):
            x = state.incumbent.bits
            assert state.lo <= f.peek(x) - g.peek(x)
            assert state.hi >= best_diff - 1e-12

        res = difference_from_ratio(brute_force_solver("ratio"), f, g, eps, callback=check)
        assert res.objective >= best_diff - eps
        assert res.solver_calls <= max_iterations(span, eps) + 1
        assert res.upper_bound - res.lower_bound <= eps


@pytest.mark.parametrize("eps", [1e-2, 1e-4])
def test_ratio_from_difference_invariants(eps, rng):
    for _ in range(15):
        n = int(rng.integers(2, 8))
        f, g = random_pair(n, rng)
        _, best_ratio = opt_values(f, g)
        full = (1 << n) - 1
        span = (f.peek(full) - f.peek(0)) / g.peek(0)

        def check(state):
            x = state.incumbent.bits
            assert state.lo <= f.peek(x) / g.peek(x)
            assert state.hi >= best_ratio - 1e-12

        res = ratio_from_difference(brute_force_solver("diff"), f, g, eps, callback=check)
        assert res.objective >= best_ratio - eps
        assert res.solver_calls <= max_iterations(span, eps) + 1


def test_weak_guarantee_with_greedy_inner(rng):
    # greedy is exact on modular pairs, so alpha = 1 is honest here
    for _ in range(10):
        n = int(rng.integers(2, 7))
        f = ModularFunction(rng.integers(0, 6, n).tolist())
        g = ModularFunction(rng.integers(0, 6, n).tolist(), offset=1)
        best_diff, best_ratio = opt_values(f, g)
        r1 = difference_from_ratio(greedy_solver("ratio", 1.0), f, g, 1e-3)
        r2 = ratio_from_difference(greedy_solver("diff", 1.0), f, g, 1e-3)
        assert r1.objective >= best_diff - 1e-3
        assert r2.objective >= best_ratio - 1e-3


def test_bisection_and_dinkelbach_agree(rng):
    eps = 1e-3
    for _ in range(10):
        n = int(rng.integers(2, 7))
        f, g = random_pair(n, rng)
        a = exact_ratio_by_bisection(brute_force_solver("diff"), f, g, eps)
        b = dinkelbach_ratio(brute_force_solver("diff"), f, g, eps=eps)
        assert abs(a.objective - b.ratio) <= 2 * eps


def test_solver_fault_on_bad_solver():
    f = ModularFunction([5, 5])
    g = ModularFunction([1, 1], offset=1)
    bad = ApproxSolver("ratio", 1.0, lambda f, g: 0, name="empty")
    with pytest.raises(SolverFault):
        difference_from_ratio(bad, f, g, 1e-3)
    bad = ApproxSolver("diff", 1.0, lambda f, g: 0, name="empty")
    with pytest.raises(SolverFault):
        ratio_from_difference(bad, f, g, 1e-3)


def test_shift_keeps_ratio_solver_in_domain():
    f = ModularFunction([1, 2])
    g = ModularFunction([1, 1])  # g({}) = 0
    seen = []

    def solve(f2, g2):
        assert isinstance(g2, ShiftedFunction) and g2.peek(0) > 0
        seen.append(g2.shift)
        return brute_force_solver("ratio")(f2, g2)

    res = difference_from_ratio(ApproxSolver("ratio", 1.0, solve), f, g, 1e-3)
    assert seen and res.objective == pytest.approx(1.0)


@pytest.mark.parametrize("eps", [1e-2, 1e-4])
def test_dinkelbach(eps, rng):
    for _ in range(15):
        n = int(rng.integers(2, 8))
        f, g = random_pair(n, rng)
        _, best_ratio = opt_values(f, g)
        res = dinkelbach_ratio(brute_force_solver("diff"), f, g, eps=eps)
        assert res.ratio >= best_ratio - eps
        assert all(b > a for a, b in zip(res.ratios, res.ratios[1:]))
        assert res.ratio == res.ratios[-1]


def test_dinkelbach_convergence_rate(rng):
    # lam* - lam_{k+1} <= (lam* - lam_k) * (1 - g(x*) / g(x_{k+1})) with an exact inner solver
    checked = 0
    for _ in range(40):
        n = int(rng.integers(2, 9))
        f, g = random_pair(n, rng)
        ratios = [f.peek(b) / g.peek(b) for b in range(1 << n)]
        best = max(ratios)
        x_star = ratios.index(best)
        res = dinkelbach_ratio(brute_force_solver("diff"), f, g, eps=1e-9)
        assert len(res.sets) == len(res.ratios)
        for k in range(len(res.ratios) - 1):
            gap_k = best - res.ratios[k]
            if gap_k <= 0:
                continue
            rate = 1 - g.peek(x_star) / g.peek(res.sets[k + 1])
            assert best - res.ratios[k + 1] <= gap_k * rate + 1e-12
            checked += 1
    assert checked > 0


def test_dinkelbach_iteration_cap():
    f = ModularFunction([5, 5])
    g = ModularFunction([1, 1], offset=1)
    with pytest.raises(SolverFault):
        dinkelbach_ratio(brute_force_solver("diff"), f, g, eps=1e-6, max_iter=0)


def test_result_dict(rng):
    f, g = random_pair(4, rng)
    d = difference_from_ratio(brute_force_solver("ratio"), f, g, 1e-2).to_dict()
    assert set(d) == {"x", "objective", "iterations", "solver_calls", "certified_lower_bound", "upper_bound"}
