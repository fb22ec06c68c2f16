"""Exhaustive property checks for small ground sets (testing aids)."""

from __future__ import annotations

from .brute import all_values, check_brute_size
from .core import SetFunction

__all__ = ["is_submodular", "is_monotone", "is_modular", "find_submodularity_violation"]


def find_submodularity_violation(f: SetFunction, tol: float = 1e-9):
    """First pair ``(A, B)`` (as bits) with ``f(A|B) + f(A&B) > f(A) + f(B) + tol``, or None."""
    check_brute_size(f.n)
    v = all_values(f)
    size = 1 << f.n
    for a in range(size):
        for b in range(a + 1, size):
            if v[a | b] + v[a & b] > v[a] + v[b] + tol:
                return a, b
    return None


def is_submodular(f: SetFunction, tol: float = 1e-9) -> bool:
    return find_submodularity_violation(f, tol) is None


def is_monotone(f: SetFunction, tol: float = 1e-9) -> bool:
    """Checks ``f(A) <= f(A + i)`` for every ``A`` and ``i``, which implies monotonicity."""
    check_brute_size(f.n)
    v = all_values(f)
    for a in range(1 << f.n):
        for i in range(f.n):
            if not a >> i & 1 and v[a] > v[a | (1 << i)] + tol:
                return False
    return True


def is_modular(f: SetFunction, tol: float = 1e-9) -> bool:
    check_brute_size(f.n)
    v = all_values(f)
    for a in range(1 << f.n):
        expected = v[0] + sum(v[1 << i] - v[0] for i in range(f.n) if a >> i & 1)
        if abs(v[a] - expected) > tol:
            return False
    return True
