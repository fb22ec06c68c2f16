"""JSON instance files pairing two set functions.

Two layouts are accepted::

    {"f": {"type": "coverage", ...}, "g": {"type": "modular", ...}}
    {"imc": {"graph": {...}, "weights": [...], "T": 10, "seed": 0,
             "costs": [...], "lambda": 1.0}}

The second builds the spread function and the scaled cost function of an
influence-with-costs instance.
"""

from __future__ import annotations

import json

from .core import SetFunction
from .functions import builtin_function
from .influence import CascadeInstance

__all__ = ["load_instance", "instance_from_dict"]


def instance_from_dict(d) -> tuple[SetFunction, SetFunction]:
    if not isinstance(d, dict):
        raise ValueError("instance must be a JSON object")
    if "imc" in d:
        inst = CascadeInstance.from_dict(d["imc"])
        return inst.spread_function(), inst.cost_function()
    if "f" not in d or "g" not in d:
        raise ValueError("instance needs both 'f' and 'g' (or an 'imc' block)")
    f, g = builtin_function(d["f"]), builtin_function(d["g"])
    if f.n != g.n:
        raise ValueError(f"f and g have different ground sets ({f.n} vs {g.n})")
    return f, g


def load_instance(path) -> tuple[SetFunction, SetFunction]:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON: {exc}") from exc
    return instance_from_dict(d)
