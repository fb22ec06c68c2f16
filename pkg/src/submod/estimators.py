"""Scikit-learn style wrappers around the solvers.

Estimators are configured through constructor parameters (so ``get_params``,
``set_params`` and ``clone`` work) and fitted on a pair of set functions::

    est = PsiGreedy(psi="ratio", lazy=True).fit(f, g)
    est.selected_, est.value_
"""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .baselines import modmod
from .brute import brute_force_max
from .combiners import get_combiner
from .greedy import knapsack_psi_greedy, psi_greedy
from .reductions import (
    brute_force_solver,
    difference_from_ratio,
    dinkelbach_ratio,
    ratio_from_difference,
)
from .validation import check_pair, check_positive

__all__ = [
    "SetFunctionMaximizer",
    "PsiGreedy",
    "KnapsackPsiGreedy",
    "ModMod",
    "BruteForce",
    "DifferenceFromRatio",
    "RatioFromDifference",
    "Dinkelbach",
]


class SetFunctionMaximizer(BaseEstimator):
    """Base class: ``fit(f, g)`` sets ``selected_``, ``value_``, ``f_value_``, ``g_value_``."""

    def _objective(self):
        return get_combiner(getattr(self, "psi", "diff"))

    def _finish(self, f, g, S):
        self.selected_ = S
        self.f_value_ = f.peek(S)
        self.g_value_ = g.peek(S)
        self.value_ = self._objective()(self.f_value_, self.g_value_)
        self.n_features_in_ = f.n
        return self

    def _check_fitted(self):
        if not hasattr(self, "selected_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet; call fit(f, g) first")

    def predict(self, f=None, g=None):
        """Selected elements as a sorted list."""
        self._check_fitted()
        return self.selected_.elements()

    def score(self, f, g) -> float:
        """Objective of the fitted subset re-evaluated on ``(f, g)``."""
        self._check_fitted()
        check_pair(f, g)
        return self._objective()(f.peek(self.selected_), g.peek(self.selected_))


class PsiGreedy(SetFunctionMaximizer):
    def __init__(self, psi="diff", lazy=False):
        self.psi = psi
        self.lazy = lazy

    def fit(self, f, g):
        check_pair(f, g)
        S, trace = psi_greedy(f, g, get_combiner(self.psi), lazy=self.lazy)
        self.trace_ = trace
        return self._finish(f, g, S)


class KnapsackPsiGreedy(SetFunctionMaximizer):
    def __init__(self, budget=1.0, eps=0.1, psi="diff", lazy=False):
        self.budget = budget
        self.eps = eps
        self.psi = psi
        self.lazy = lazy

    def fit(self, f, g):
        check_pair(f, g)
        check_positive(self.eps, "eps")
        res = knapsack_psi_greedy(f, g, get_combiner(self.psi), self.budget, self.eps, self.lazy)
        self.result_ = res
        return self._finish(f, g, res.selected)


class ModMod(SetFunctionMaximizer):
    """ModMod baseline for ``f - g`` with modular ``g``."""

    def __init__(self, max_iters=100, random_state=None):
        self.max_iters = max_iters
        self.random_state = random_state

    def fit(self, f, g):
        check_pair(f, g, require_g=("modular",))
        res = modmod(f, g, self.random_state, self.max_iters)
        self.result_ = res
        self.n_iter_ = res.iterations
        return self._finish(f, g, res.selected)


class BruteForce(SetFunctionMaximizer):
    def __init__(self, psi="diff", budget=None):
        self.psi = psi
        self.budget = budget

    def fit(self, f, g):
        check_pair(f, g)
        S, _ = brute_force_max(f, g, get_combiner(self.psi), self.budget)
        return self._finish(f, g, S)


class DifferenceFromRatio(SetFunctionMaximizer):
    """Difference maximisation via bisection over a ratio solver (exhaustive by default)."""

    def __init__(self, solver=None, eps=1e-4):
        self.solver = solver
        self.eps = eps

    def fit(self, f, g):
        check_pair(f, g)
        solver = self.solver if self.solver is not None else brute_force_solver("ratio")
        res = difference_from_ratio(solver, f, g, check_positive(self.eps, "eps"))
        self.result_ = res
        self.n_iter_ = res.iterations
        return self._finish(f, g, res.x)


class RatioFromDifference(SetFunctionMaximizer):
    def __init__(self, solver=None, eps=1e-4):
        self.solver = solver
        self.eps = eps

    def _objective(self):
        return get_combiner("ratio")

    def fit(self, f, g):
        check_pair(f, g)
        solver = self.solver if self.solver is not None else brute_force_solver("diff")
        res = ratio_from_difference(solver, f, g, check_positive(self.eps, "eps"))
        self.result_ = res
        self.n_iter_ = res.iterations
        return self._finish(f, g, res.x)


class Dinkelbach(SetFunctionMaximizer):
    def __init__(self, solver=None, eps=1e-6, x0=None):
        self.solver = solver
        self.eps = eps
        self.x0 = x0

    def _objective(self):
        return get_combiner("ratio")

    def fit(self, f, g):
        check_pair(f, g)
        solver = self.solver if self.solver is not None else brute_force_solver("diff")
        res = dinkelbach_ratio(solver, f, g, self.x0, check_positive(self.eps, "eps"))
        self.result_ = res
        self.n_iter_ = res.solver_calls
        return self._finish(f, g, res.x)
