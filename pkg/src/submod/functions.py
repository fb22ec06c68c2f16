"""Built-in set functions and a factory building them from plain dicts."""

from __future__ import annotations

import math
from typing import Callable, Mapping, Sequence

import numpy as np

from .core import Props, SetFunction, iter_bits

__all__ = [
    "ModularFunction",
    "CoverageFunction",
    "ConcaveOfModularFunction",
    "FacilityLocationFunction",
    "TableFunction",
    "SumFunction",
    "sqrt_modular",
    "builtin_function",
    "CONCAVE_PHIS",
]

CONCAVE_PHIS: dict[str, Callable[[float], float]] = {
    "sqrt": math.sqrt,
    "log1p": math.log1p,
    "tanh": math.tanh,
    "identity": lambda x: x,
}


def _weights(weights, name="weights") -> list:
    w = list(weights)
    for x in w:
        if not math.isfinite(x) or x < 0:
            raise ValueError(f"{name} must be finite and non-negative, got {x!r}")
    return w


def _props(offset: float, modular=False) -> Props:
    return Props(
        monotone=True,
        submodular=True,
        modular=modular,
        normalized=offset == 0,
        positive=offset > 0,
    )


class ModularFunction(SetFunction):
    """``S -> offset + sum of weights[i] for i in S``.

    Weights are kept as given (ints, floats or fractions) so integer and
    rational instances evaluate exactly.
    """

    def __init__(self, weights: Sequence[float], offset: float = 0):
        self.weights = _weights(weights)
        if offset < 0:
            raise ValueError("offset must be non-negative")
        self.offset = offset
        super().__init__(len(self.weights), _props(offset, modular=True))

    def _eval(self, bits):
        w = self.weights
        return self.offset + sum(w[i] for i in iter_bits(bits))


class CoverageFunction(SetFunction):
    """Weighted coverage: total weight of the items covered by ``S``.

    Parameters
    ----------
    sets : sequence of iterables
        ``sets[i]`` lists the items covered by element ``i``. Items may be any
        hashable labels.
    item_weights : mapping, optional
        Weight of each item, default 1.
    """

    def __init__(self, sets, item_weights: Mapping | None = None, offset: float = 0):
        sets = [list(s) for s in sets]
        labels = sorted({x for s in sets for x in s}, key=repr)
        index = {x: k for k, x in enumerate(labels)}
        self.sets = sets
        self.item_weights = [1 if item_weights is None else item_weights.get(x, 1) for x in labels]
        _weights(self.item_weights, "item weights")
        self._covers = []
        for s in sets:
            bits = 0
            for x in s:
                bits |= 1 << index[x]
            self._covers.append(bits)
        self._unit = all(w == 1 for w in self.item_weights)
        if offset < 0:
            raise ValueError("offset must be non-negative")
        self.offset = offset
        super().__init__(len(sets), _props(offset))

    def covered(self, bits: int) -> int:
        covers = self._covers
        out = 0
        for i in iter_bits(bits):
            out |= covers[i]
        return out

    def _eval(self, bits):
        c = self.covered(bits)
        if self._unit:
            return self.offset + c.bit_count()
        w = self.item_weights
        return self.offset + sum(w[k] for k in iter_bits(c))


class ConcaveOfModularFunction(SetFunction):
    """``S -> offset + phi(sum of weights[i] for i in S)``.

    ``phi`` must be non-decreasing and concave on ``[0, inf)``; the result
    is then monotone submodular. ``phi`` may be one of the names in
    :data:`CONCAVE_PHIS` or any callable.
    """

    def __init__(self, weights, phi="sqrt", offset: float = 0):
        self.weights = _weights(weights)
        if isinstance(phi, str):
            if phi not in CONCAVE_PHIS:
                raise ValueError(f"unknown concave function {phi!r}; choose from {sorted(CONCAVE_PHIS)}")
            self.phi_name = phi
            phi = CONCAVE_PHIS[phi]
        else:
            self.phi_name = getattr(phi, "__name__", "custom")
        self.phi = phi
        if offset < 0:
            raise ValueError("offset must be non-negative")
        self.offset = offset
        normalized = offset == 0 and phi(0) == 0
        super().__init__(
            len(self.weights),
            Props(monotone=True, submodular=True, normalized=normalized, positive=offset + phi(0) > 0),
        )

    def _eval(self, bits):
        w = self.weights
        return self.offset + self.phi(sum(w[i] for i in iter_bits(bits)))


def sqrt_modular(weights, offset: float = 0) -> ConcaveOfModularFunction:
    """``S -> offset + sqrt(sum of weights over S)``."""
    return ConcaveOfModularFunction(weights, "sqrt", offset)


class FacilityLocationFunction(SetFunction):
    """``S -> sum_j max_{i in S} similarity[j, i]`` (zero for the empty set).

    ``similarity`` has one row per client and one column per ground-set
    element; entries must be non-negative.
    """

    def __init__(self, similarity, offset: float = 0):
        sim = np.asarray(similarity, dtype=float)
        if sim.ndim != 2 or sim.shape[1] < 1:
            raise ValueError("similarity must be a 2-d array with at least one column")
        if (sim < 0).any() or not np.isfinite(sim).all():
            raise ValueError("similarity entries must be finite and non-negative")
        self.similarity = sim
        if offset < 0:
            raise ValueError("offset must be non-negative")
        self.offset = offset
        super().__init__(sim.shape[1], _props(offset))

    def _eval(self, bits):
        if not bits:
            return self.offset
        cols = list(iter_bits(bits))
        return self.offset + float(self.similarity[:, cols].max(axis=1).sum())


class TableFunction(SetFunction):
    """Set function given by an explicit table of ``2**n`` values indexed by bits."""

    def __init__(self, values, props: Props = Props()):
        values = list(values)
        n = len(values).bit_length() - 1
        if n < 1 or len(values) != 1 << n:
            raise ValueError(f"table length must be a power of two >= 2, got {len(values)}")
        self.values = values
        super().__init__(n, props)

    def _eval(self, bits):
        return self.values[bits]


class SumFunction(SetFunction):
    """Pointwise sum of set functions over the same ground set."""

    def __init__(self, terms: Sequence[SetFunction]):
        terms = list(terms)
        if not terms:
            raise ValueError("SumFunction needs at least one term")
        n = terms[0].n
        if any(t.n != n for t in terms):
            raise ValueError("all terms must share the ground set size")
        self.terms = terms
        ps = [t.props for t in terms]
        props = Props(
            monotone=all(p.monotone for p in ps),
            submodular=all(p.submodular for p in ps),
            modular=all(p.modular for p in ps),
            normalized=all(p.normalized for p in ps),
            # sum of non-negatives with one positive term
            positive=any(p.positive for p in ps) and all(p.positive or p.monotone and p.normalized for p in ps),
        )
        super().__init__(n, props)

    def _eval(self, bits):
        return sum(t._eval(bits) for t in self.terms)


def builtin_function(spec: Mapping) -> SetFunction:
    """Build a set function from a plain description.

    Recognised ``type`` values and their keys:

    ``modular``            ``weights``, ``offset``
    ``coverage``           ``sets``, ``item_weights``, ``offset``
    ``sqrt_modular``       ``weights``, ``offset``
    ``concave_modular``    ``weights``, ``phi``, ``offset``
    ``facility_location``  ``similarity``, ``offset``
    ``table``              ``values`` plus the boolean property flags
    ``sum``                ``terms`` (list of nested specs)

    Raises
    ------
    ValueError
        If the description is malformed; the message names the offending key.
    """
    if not isinstance(spec, Mapping):
        raise ValueError(f"function spec must be a mapping, got {type(spec).__name__}")
    kind = spec.get("type")
    offset = spec.get("offset", 0)

    def need(key):
        if key not in spec:
            raise ValueError(f"{kind!r} function spec is missing {key!r}")
        return spec[key]

    try:
        if kind == "modular":
            return ModularFunction(need("weights"), offset)
        if kind == "coverage":
            return CoverageFunction(need("sets"), spec.get("item_weights"), offset)
        if kind == "sqrt_modular":
            return sqrt_modular(need("weights"), offset)
        if kind == "concave_modular":
            return ConcaveOfModularFunction(need("weights"), spec.get("phi", "sqrt"), offset)
        if kind == "facility_location":
            return FacilityLocationFunction(need("similarity"), offset)
        if kind == "table":
            flags = {k: bool(spec.get(k, False)) for k in Props.__dataclass_fields__}
            return TableFunction(need("values"), Props(**flags))
        if kind == "sum":
            return SumFunction([builtin_function(t) for t in need("terms")])
    except (TypeError, KeyError) as exc:
        raise ValueError(f"invalid {kind!r} function spec: {exc}") from exc
    raise ValueError(f"unknown function type {kind!r}")
