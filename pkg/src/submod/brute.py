"""Exhaustive oracles over all ``2**n`` subsets (small ``n`` only)."""

from __future__ import annotations

from typing import Callable

from .combiners import Combiner, get_combiner
from .core import SetFunction, SubsetMask

__all__ = ["MAX_BRUTE_N", "check_brute_size", "all_values", "brute_force_max"]

MAX_BRUTE_N = 24


def check_brute_size(n: int) -> None:
    if n > MAX_BRUTE_N:
        raise ValueError(f"exhaustive enumeration limited to n <= {MAX_BRUTE_N}, got n = {n}")


def all_values(f: SetFunction) -> list[float]:
    """Values of ``f`` on every subset, indexed by bits."""
    check_brute_size(f.n)
    return [f(bits) for bits in range(1 << f.n)]


def brute_force_max(
    f: SetFunction,
    g: SetFunction,
    psi: Combiner | str | Callable = "diff",
    budget: float | None = None,
) -> tuple[SubsetMask, float]:
    """Exact maximiser of ``psi(f(S), g(S))``, optionally subject to ``g(S) <= budget``.

    Ties go to the numerically smallest mask. Returns ``(mask, value)``;
    raises ValueError when no subset is feasible.
    """
    if not callable(psi) or isinstance(psi, str):
        psi = get_combiner(psi)
    n = f.n
    check_brute_size(n)
    best_bits, best_val = None, None
    for bits in range(1 << n):
        gv = g(bits)
        if budget is not None and gv > budget:
            continue
        val = psi(f(bits), gv)
        if best_val is None or val > best_val:
            best_bits, best_val = bits, val
    if best_bits is None:
        raise ValueError(f"no subset satisfies g(S) <= {budget}")
    return SubsetMask(n, best_bits), best_val
