import json

import numpy as np
import pytest

from submod.checks import is_monotone, is_submodular
from submod.influence import (
    CascadeInstance,
    DirectedGraph,
    EdgeListError,
    SpreadFunction,
    cost_function,
    erdos_renyi_digraph,
    load_edge_list,
    reachability_masks,
    sample_live_graphs,
    spread,
)


def closure(graph):
    """Floyd-Warshall transitive closure (reflexive)."""
    n = graph.n_vertices
    R = np.eye(n, dtype=bool)
    for u, v in graph.edges:
        R[u, v] = True
    for k in range(n):
        R |= R[:, [k]] & R[[k], :]
    return R


def test_bfs_matches_closure(rng):
    for _ in range(10):
        n = int(rng.integers(1, 9))
        G = erdos_renyi_digraph(n, float(rng.uniform(0.05, 0.5)), rng)
        R = closure(G)
        masks = reachability_masks(G)
        for bits in range(1 << n):
            seeds = [i for i in range(n) if bits >> i & 1]
            want = int(R[seeds].any(axis=0).sum()) if seeds else 0
            assert spread(bits, G) == want
            got = 0
            for s in seeds:
                got |= masks[s]
            assert bin(got).count("1") == want


def test_cycle_and_chain():
    G = DirectedGraph(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
    assert spread([0], G) == 4
    assert spread([3], G) == 1
    assert spread([], G) == 0
    assert reachability_masks(G) == [0b1111, 0b1111, 0b1111, 0b1000]


def test_graph_dedup_and_validation():
    G = DirectedGraph(3, [(1, 2), (0, 1), (1, 2)])
    assert G.n_edges == 2 and G.edges.tolist() == [[0, 1], [1, 2]]
    with pytest.raises(ValueError):
        DirectedGraph(2, [(0, 2)])
    assert DirectedGraph.from_dict(G.to_dict()) == G


def test_load_edge_list(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# comment\nb a\n\na c  # trailing\nb a\n")
    G, mapping = load_edge_list(p)
    assert mapping == {"b": 0, "a": 1, "c": 2}
    assert G.edges.tolist() == [[0, 1], [1, 2]]
    Gu, _ = load_edge_list(p, undirected=True)
    assert Gu.n_edges == 4
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n3\n")
    with pytest.raises(EdgeListError, match=":2:"):
        load_edge_list(bad)
    with pytest.raises(OSError):
        load_edge_list(tmp_path / "missing.txt")


def test_sampling_frequency():
    G = DirectedGraph(2, [(0, 1)])
    live = sample_live_graphs(G, [0.5], 10000, np.random.default_rng(3))
    frac = np.mean([L.n_edges for L in live])
    assert abs(frac - 0.5) <= 0.02


def test_sampling_extremes_and_validation(rng):
    G = erdos_renyi_digraph(6, 0.5, rng)
    m = G.n_edges
    assert all(L.n_edges == 0 for L in sample_live_graphs(G, np.zeros(m), 3, rng))
    assert all(L == G for L in sample_live_graphs(G, np.ones(m), 3, rng))
    with pytest.raises(ValueError):
        sample_live_graphs(G, np.full(m, 1.5), 3, rng)
    with pytest.raises(ValueError):
        sample_live_graphs(G, np.zeros(m + 1), 3, rng)
    with pytest.raises(ValueError):
        sample_live_graphs(G, np.zeros(m), 0, rng)


def test_cache_is_transparent(rng):
    G = erdos_renyi_digraph(9, 0.3, rng)
    live = sample_live_graphs(G, rng.uniform(0, 0.6, G.n_edges), 5, rng)
    a, b = SpreadFunction(live, cache=True), SpreadFunction(live, cache=False)
    for bits in range(1 << 9):
        assert a(bits) == b(bits)


def test_spread_function_submodular(rng):
    for _ in range(3):
        n = int(rng.integers(3, 11))
        G = erdos_renyi_digraph(n, 0.3, rng)
        live = sample_live_graphs(G, rng.uniform(0, 1, G.n_edges), 4, rng)
        f = SpreadFunction(live)
        assert f(0) == 0 and f((1 << n) - 1) == n
        assert is_monotone(f) and is_submodular(f)


def test_instance_roundtrip(tmp_path, rng):
    G = erdos_renyi_digraph(10, 0.2, rng)
    inst = CascadeInstance.generate(G, rng.uniform(0, 0.1, G.n_edges), 5, rng.uniform(0, 1, 10), 2.0, seed=42)
    path = tmp_path / "inst.json"
    inst.save(path)
    back = CascadeInstance.load(path)
    assert all(x == y for x, y in zip(back.live_graphs, inst.live_graphs))
    f1, f2 = inst.spread_function(), back.spread_function()
    assert all(f1(b) == f2(b) for b in range(0, 1 << 10, 7))
    assert back.cost_function()([0, 1]) == pytest.approx(2.0 * (inst.costs[0] + inst.costs[1]))
    with pytest.raises(ValueError):
        CascadeInstance.from_dict({"graph": G.to_dict()})


def test_cost_function():
    c = cost_function([1.0, 2.0], 0.5)
    assert c.props.modular and c([0, 1]) == 1.5
    assert cost_function([1.0], 0.0)([0]) == 0
    with pytest.raises(ValueError):
        cost_function([1.0], -1)
