"""Maximising ratios, differences and other combinations of two submodular functions."""

from .baselines import ModularLowerBound, modmod, modular_lower_bound
from .brute import all_values, brute_force_max
from .combiners import (
    DIFF_SQRT,
    DIFFERENCE,
    RATIO,
    RATIO_SQRT,
    Combiner,
    DomainError,
    check_quasiconvex_on_segment,
    evaluate,
    get_combiner,
)
from .core import (
    CurvatureError,
    GroundSet,
    Props,
    ScaledFunction,
    SetFunction,
    ShiftedFunction,
    SubsetMask,
    curvature,
    marginal_gain,
)
from .estimators import (
    BruteForce,
    DifferenceFromRatio,
    Dinkelbach,
    KnapsackPsiGreedy,
    ModMod,
    PsiGreedy,
    RatioFromDifference,
)
from .functions import (
    ConcaveOfModularFunction,
    CoverageFunction,
    FacilityLocationFunction,
    ModularFunction,
    SumFunction,
    TableFunction,
    builtin_function,
    sqrt_modular,
)
from .greedy import GreedyTrace, InfeasibleError, RatioKey, knapsack_psi_greedy, psi_greedy
from .reductions import (
    ApproxSolver,
    SolverFault,
    brute_force_solver,
    difference_from_ratio,
    dinkelbach_ratio,
    exact_ratio_by_bisection,
    greedy_solver,
    ratio_from_difference,
)

__version__ = "0.1.0"
