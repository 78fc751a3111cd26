import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lnperc.analytics import solve_xi_star
from lnperc.components import (
    component_labels,
    component_labels_union_find,
    largest_component,
    size_distribution,
)
from lnperc.netgen import Graph, er_pairs
from lnperc.rng import generator

from oracles import components_by_dfs


def random_graph(n, mean_degree, seed):
    u, v = er_pairs(n, min(1.0, mean_degree / n), generator(seed))
    return Graph.from_edges(n, u, v)


def test_empty_graph():
    rep = largest_component(Graph.from_edges(100, [], []))
    assert rep.largest_size == 1 and rep.n_components == 100
    assert rep.size_histogram == {1: 100}


def test_path_plus_isolated():
    g = Graph.from_edges(15, list(range(9)), list(range(1, 10)))
    rep = largest_component(g)
    assert rep.largest_size == 10 and rep.n_components == 6
    assert rep.giant_fraction_sim == 10 / 15


def test_complete_graph_and_triangles():
    i, j = np.triu_indices(4, k=1)
    assert size_distribution(Graph.from_edges(4, i, j)) == {4: 1}
    tri = Graph.from_edges(6, [0, 1, 2, 3, 4, 5], [1, 2, 0, 4, 5, 3])
    assert size_distribution(tri) == {3: 2}


def test_giant_fraction_matches_er_theory():
    n = 100_000
    rep = largest_component(random_graph(n, 2.0, 5))
    assert abs(rep.giant_fraction_sim - (1 - solve_xi_star(2.0))) < 0.01


@pytest.mark.parametrize("seed", range(100))
def test_bfs_and_union_find_agree(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 400))
    g = random_graph(n, float(rng.uniform(0, 3)), seed)
    bfs, uf = component_labels(g), component_labels_union_find(g)
    assert np.array_equal(bfs, uf)
    hist = size_distribution(g)
    assert sorted(s for s, c in hist.items() for _ in range(c)) == components_by_dfs(n, g.edges().tolist())


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 300), st.floats(0, 3), st.integers(0, 2**32))
def test_report_invariants_and_permutation(n, k, seed):
    g = random_graph(n, k, seed)
    rep = largest_component(g)
    assert sum(s * c for s, c in rep.size_histogram.items()) == n
    assert rep.largest_size == max(rep.size_histogram)
    assert 1 <= rep.largest_size <= n
    perm = np.random.default_rng(seed).permutation(n)
    e = g.edges()
    h = Graph.from_edges(n, perm[e[:, 0]], perm[e[:, 1]])
    assert largest_component(h) == rep


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 200), st.floats(0, 3), st.integers(0, 2**32), st.data())
def test_adding_an_edge_is_monotone(n, k, seed, data):
    g = random_graph(n, k, seed)
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1).filter(lambda x: x != a))
    edges = {tuple(p) for p in g.edges().tolist()} | {(min(a, b), max(a, b))}
    u, v = zip(*edges)
    before, after = largest_component(g), largest_component(Graph.from_edges(n, u, v))
    assert after.largest_size >= before.largest_size
    assert after.n_components <= before.n_components


def test_node_weighted_mean_size():
    g = Graph.from_edges(6, [0, 1, 3], [1, 2, 4])  # sizes 3, 2, 1
    rep = largest_component(g)
    assert rep.mean_component_size == pytest.approx((9 + 4 + 1) / 6)


def test_bfs_handles_long_paths():
    n = 200_000
    g = Graph.from_edges(n, np.arange(n - 1), np.arange(1, n))
    assert largest_component(g).largest_size == n
