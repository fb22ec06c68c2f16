"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

import numbers

import numpy as np

from .core import SetFunction

__all__ = ["check_rng", "check_set_function", "check_pair", "check_positive"]


def check_rng(seed=None) -> np.random.Generator:
    """Turn ``None``, an int, a SeedSequence or a Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (numbers.Integral, np.random.SeedSequence)):
        return np.random.default_rng(seed)
    raise ValueError(f"{seed!r} cannot be used to seed a numpy Generator")


def check_set_function(f, name="f", require=()) -> SetFunction:
    if not isinstance(f, SetFunction):
        raise TypeError(f"{name} must be a SetFunction, got {type(f).__name__}")
    for flag in require:
        if not getattr(f.props, flag):
            raise ValueError(f"{name} must be declared {flag}")
    return f


def check_pair(f, g, require_f=(), require_g=()) -> tuple[SetFunction, SetFunction]:
    check_set_function(f, "f", require_f)
    check_set_function(g, "g", require_g)
    if f.n != g.n:
        raise ValueError(f"f and g have different ground sets ({f.n} vs {g.n})")
    return f, g


def check_positive(value, name) -> float:
    if not isinstance(value, numbers.Real) or not value > 0:
        raise ValueError(f"{name} must be a positive number, got {value!r}")
    return float(value)
