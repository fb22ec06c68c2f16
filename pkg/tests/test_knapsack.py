import math

import pytest

from submod.combiners import DIFFERENCE, RATIO
from submod.core import curvature
from submod.functions import ModularFunction
from submod.greedy import InfeasibleError, budget_levels, knapsack_psi_greedy

from randinst import random_modular, random_pair, random_submodular


def test_budget_levels():
    assert budget_levels(1.0, 0.25) == [0.25, 0.5, 0.75, 1.0]
    assert budget_levels(1.0, 0.3) == pytest.approx([0.3, 0.6, 0.9, 1.0])
    assert budget_levels(0.1, 0.5) == [0.1]
    with pytest.raises(ValueError):
        budget_levels(1.0, 0.0)
    with pytest.raises(ValueError):
        budget_levels(-1.0, 0.1)


def test_budget_respected_and_guarantee(rng):
    for _ in range(15):
        n = int(rng.integers(3, 8))
        f = random_submodular(n, rng)
        g = random_modular(n, rng, high=5)
        total = g.peek((1 << n) - 1)
        B = float(rng.uniform(0.2, 0.8)) * total
        eps = float(rng.uniform(0.1, 1.0))
        res = knapsack_psi_greedy(f, g, "diff", B, eps)
        assert res.g <= B + 1e-12
        assert res.value == f.peek(res.selected) - g.peek(res.selected)
        factor = 1 - math.exp(curvature(g) - 1)
        for b in range(1 << n):
            if g.peek(b) <= B:
                assert factor * f.peek(b) - g.peek(b) <= res.f - (res.g - eps) + 1e-9


def test_small_sets_found_by_enumeration():
    f = ModularFunction([10, 1, 1])
    g = ModularFunction([1, 1, 1])
    res = knapsack_psi_greedy(f, g, "diff", budget=1.0, eps=0.5)
    assert res.selected.elements() == [0]
    assert res.source == "enumeration"


def test_infeasible_and_bad_combiner():
    f = ModularFunction([1, 2])
    with pytest.raises(InfeasibleError):
        knapsack_psi_greedy(f, ModularFunction([1, 1], offset=5), "diff", 1.0, 0.5)
    from submod.combiners import Combiner

    weird = Combiner("sum", lambda a, b: a + b)
    with pytest.raises(ValueError):
        knapsack_psi_greedy(f, ModularFunction([1, 1]), weird, 1.0, 0.5)


def test_ratio_variant_runs(rng):
    f, g = random_pair(6, rng)
    B = g.peek((1 << 6) - 1) * 0.6
    res = knapsack_psi_greedy(f, g, RATIO, B, 0.2, lazy=True)
    assert res.g <= B
    assert res.to_dict()["levels"] == len(res.levels)


def test_lazy_same_result(rng):
    f = random_submodular(7, rng)
    g = random_modular(7, rng, high=4)
    a = knapsack_psi_greedy(f, g, DIFFERENCE, 6.0, 0.5)
    b = knapsack_psi_greedy(f, g, DIFFERENCE, 6.0, 0.5, lazy=True)
    assert a.selected == b.selected and a.value == b.value
