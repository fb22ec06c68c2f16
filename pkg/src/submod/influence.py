"""Influence maximisation with costly seeds under the independent cascade model.

The spread of a seed set is averaged over ``T`` live-edge graphs sampled
once per instance, so the spread function is deterministic. A seed counts
itself as influenced.
"""

from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass, field
from graphlib import TopologicalSorter

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .core import Props, SetFunction, as_bits, iter_bits
from .functions import ModularFunction
from .validation import check_rng

__all__ = [
    "DirectedGraph",
    "EdgeListError",
    "CascadeInstance",
    "SpreadFunction",
    "sample_live_graphs",
    "spread",
    "reachability_masks",
    "cost_function",
    "load_edge_list",
    "erdos_renyi_digraph",
]


class DirectedGraph:
    """Directed graph on vertices ``0..n_vertices-1`` with deduplicated edges."""

    def __init__(self, n_vertices: int, edges=()):
        edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        edges = edges.reshape(-1, 2)
        if n_vertices < 0:
            raise ValueError("n_vertices must be non-negative")
        if edges.size and (edges.min() < 0 or edges.max() >= n_vertices):
            raise ValueError(f"edge endpoint outside 0..{n_vertices - 1}")
        if len(edges):
            edges = np.unique(edges, axis=0)
        self.n_vertices = int(n_vertices)
        self.edges = edges
        self._succ = None

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def successors(self) -> list[list[int]]:
        if self._succ is None:
            succ = [[] for _ in range(self.n_vertices)]
            for u, v in self.edges.tolist():
                succ[u].append(v)
            self._succ = succ
        return self._succ

    def subgraph(self, keep: np.ndarray) -> "DirectedGraph":
        g = DirectedGraph.__new__(DirectedGraph)
        g.n_vertices = self.n_vertices
        g.edges = self.edges[np.asarray(keep, dtype=bool)]
        g._succ = None
        return g

    def to_dict(self) -> dict:
        return {"n_vertices": self.n_vertices, "edges": self.edges.tolist()}

    @classmethod
    def from_dict(cls, d) -> "DirectedGraph":
        return cls(int(d["n_vertices"]), d.get("edges", []))

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.n_vertices == other.n_vertices and np.array_equal(self.edges, other.edges)

    def __repr__(self):
        return f"DirectedGraph(n_vertices={self.n_vertices}, n_edges={self.n_edges})"


class EdgeListError(ValueError):
    pass


def load_edge_list(path, undirected: bool = False) -> tuple[DirectedGraph, dict[str, int]]:
    """Read a whitespace-separated ``u v`` edge list.

    Blank lines and ``#`` comments are ignored. Vertex labels are re-indexed
    densely in order of first appearance; the label-to-index mapping is
    returned with the graph. With ``undirected`` every edge is also added
    reversed.
    """
    mapping: dict[str, int] = {}
    edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            u, v = (mapping.setdefault(p, len(mapping)) for p in parts)
            edges.append((u, v))
            if undirected:
                edges.append((v, u))
    return DirectedGraph(len(mapping), edges), mapping


def erdos_renyi_digraph(n: int, p: float, rng=None) -> DirectedGraph:
    """Directed G(n, p) without self-loops."""
    if not 0 <= p <= 1:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = check_rng(rng)
    adj = rng.random((n, n)) < p
    np.fill_diagonal(adj, False)
    return DirectedGraph(n, np.argwhere(adj))


def sample_live_graphs(base: DirectedGraph, weights, T: int, rng=None) -> list[DirectedGraph]:
    """Keep each edge independently with probability ``weights[e]``, ``T`` times."""
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (base.n_edges,):
        raise ValueError(f"expected {base.n_edges} edge weights, got shape {weights.shape}")
    if ((weights < 0) | (weights > 1)).any():
        raise ValueError("edge weights must lie in [0, 1]")
    if T < 1:
        raise ValueError("T must be at least 1")
    rng = check_rng(rng)
    keep = rng.random((T, base.n_edges)) < weights
    return [base.subgraph(row) for row in keep]


def spread(S, graph: DirectedGraph) -> int:
    """Number of vertices reachable from ``S`` (seeds included), by BFS."""
    succ = graph.successors()
    seen = set(iter_bits(as_bits(S, graph.n_vertices)))
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen)


def reachability_masks(graph: DirectedGraph) -> list[int]:
    """Per-vertex bitmask of the vertices it reaches, via SCC condensation."""
    n = graph.n_vertices
    if n == 0:
        return []
    e = graph.edges
    adj = csr_matrix((np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(n, n))
    n_comp, labels = connected_components(adj, directed=True, connection="strong")
    labels = labels.tolist()
    comp_bits = [0] * n_comp
    for v, c in enumerate(labels):
        comp_bits[c] |= 1 << v
    deps: dict[int, set[int]] = {c: set() for c in range(n_comp)}
    for u, v in e.tolist():
        cu, cv = labels[u], labels[v]
        if cu != cv:
            deps[cu].add(cv)
    reach = [0] * n_comp
    # successors come out of static_order before the components that reach them
    for c in TopologicalSorter(deps).static_order():
        r = comp_bits[c]
        for d in deps[c]:
            r |= reach[d]
        reach[c] = r
    return [reach[labels[v]] for v in range(n)]


class SpreadFunction(SetFunction):
    """Average spread over a fixed list of live-edge graphs.

    With ``cache=True`` each live graph's per-vertex reachable sets are
    precomputed once (SCC condensation) and a query is a union of bitmasks.
    With ``cache=False`` every query runs a BFS per graph; both agree exactly.
    """

    def __init__(self, live_graphs, cache: bool = True):
        live_graphs = list(live_graphs)
        if not live_graphs:
            raise ValueError("need at least one live graph")
        n = live_graphs[0].n_vertices
        if any(G.n_vertices != n for G in live_graphs):
            raise ValueError("live graphs must share the vertex set")
        self.live_graphs = live_graphs
        self.T = len(live_graphs)
        self.cache = cache
        self._reach = [reachability_masks(G) for G in live_graphs] if cache else None
        super().__init__(n, Props(monotone=True, submodular=True, normalized=True))

    def total(self, bits: int) -> int:
        """Sum over live graphs of the number of influenced vertices."""
        if self._reach is None:
            return sum(spread(bits, G) for G in self.live_graphs)
        seeds = list(iter_bits(bits))
        out = 0
        for reach in self._reach:
            r = 0
            for s in seeds:
                r |= reach[s]
            out += r.bit_count()
        return out

    def _eval(self, bits):
        return self.total(bits) / self.T


def cost_function(costs, lam: float) -> ModularFunction:
    """``S -> lam * sum of costs[u] for u in S``."""
    costs = [float(c) for c in costs]
    if lam < 0:
        raise ValueError(f"lambda must be non-negative, got {lam}")
    return ModularFunction([lam * c for c in costs])


@dataclass
class CascadeInstance:
    """An influence-with-costs instance: graph, edge weights, live graphs and costs."""

    graph: DirectedGraph
    weights: np.ndarray
    T: int
    costs: np.ndarray
    lam: float
    seed: int | None = None
    live_graphs: list[DirectedGraph] = field(default_factory=list)

    @classmethod
    def generate(cls, graph, weights, T, costs, lam, seed=None) -> "CascadeInstance":
        """Sample the live graphs from ``seed`` (re-running gives the same instance)."""
        weights = np.asarray(weights, dtype=float)
        costs = np.asarray(costs, dtype=float)
        if costs.shape != (graph.n_vertices,):
            raise ValueError(f"expected {graph.n_vertices} costs, got shape {costs.shape}")
        if (costs < 0).any():
            raise ValueError("costs must be non-negative")
        live = sample_live_graphs(graph, weights, T, np.random.default_rng(seed))
        return cls(graph, weights, T, costs, float(lam), seed, live)

    @property
    def n(self) -> int:
        return self.graph.n_vertices

    def spread_function(self, cache: bool = True) -> SpreadFunction:
        return SpreadFunction(self.live_graphs, cache=cache)

    def cost_function(self) -> ModularFunction:
        return cost_function(self.costs, self.lam)

    def to_dict(self) -> dict:
        return {
            "graph": self.graph.to_dict(),
            "weights": self.weights.tolist(),
            "T": self.T,
            "seed": self.seed,
            "costs": self.costs.tolist(),
            "lambda": self.lam,
        }

    @classmethod
    def from_dict(cls, d) -> "CascadeInstance":
        try:
            graph = DirectedGraph.from_dict(d["graph"])
            return cls.generate(graph, d["weights"], int(d["T"]), d["costs"], d["lambda"], d.get("seed"))
        except KeyError as exc:
            raise ValueError(f"cascade instance is missing {exc}") from exc

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "CascadeInstance":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))
