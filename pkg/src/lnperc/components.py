"""Connected components of a :class:`~lnperc.netgen.Graph`."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from .netgen import Graph


@dataclass(frozen=True)
class ComponentReport:
    largest_size: int
    n_components: int
    size_histogram: dict[int, int]
    giant_fraction_sim: float

    @property
    def n_nodes(self) -> int:
        return sum(s * k for s, k in self.size_histogram.items())

    @property
    def mean_component_size(self) -> float:
        """Size of the component holding a uniformly random node."""
        return sum(s * s * k for s, k in self.size_histogram.items()) / self.n_nodes

    def to_dict(self) -> dict:
        return {
            "largest_size": self.largest_size,
            "n_components": self.n_components,
            "size_histogram": {str(s): k for s, k in sorted(self.size_histogram.items())},
            "giant_fraction_sim": self.giant_fraction_sim,
        }


def component_labels(graph: Graph) -> np.ndarray:
    """Label components by breadth-first search from the lowest unlabelled
    node; labels are 0, 1, ... in order of discovery."""
    n = graph.n_nodes
    labels = np.full(n, -1, dtype=np.int64)
    deg = graph.degrees().tolist()
    ptr = graph.indptr.tolist()
    idx = graph.indices.tolist()
    out = [-1] * n
    label = 0
    for s in range(n):
        if out[s] != -1:
            continue
        out[s] = label
        if deg[s]:
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in idx[ptr[u] : ptr[u + 1]]:
                    if out[v] == -1:
                        out[v] = label
                        queue.append(v)
        label += 1
    labels[:] = out
    return labels


def component_labels_union_find(graph: Graph) -> np.ndarray:
    """Same labelling as :func:`component_labels` via union-find with path
    halving and union by size."""
    n = graph.n_nodes
    parent = list(range(n))
    size = [1] * n

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in graph.edges().tolist():
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        if size[ru] < size[rv]:
            ru, rv = rv, ru
        parent[rv] = ru
        size[ru] += size[rv]
    roots = np.array([find(i) for i in range(n)], dtype=np.int64)
    # renumber by first appearance to match BFS discovery order
    _, first, inverse = np.unique(roots, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[inverse]


def _histogram(labels: np.ndarray) -> dict[int, int]:
    sizes = np.bincount(labels) if len(labels) else np.empty(0, dtype=np.int64)
    return dict(sorted(Counter(sizes.tolist()).items()))


def size_distribution(graph: Graph) -> dict[int, int]:
    """Map component size -> number of components of that size."""
    return _histogram(component_labels(graph))


def largest_component(graph: Graph) -> ComponentReport:
    hist = size_distribution(graph)
    largest = max(hist) if hist else 0
    return ComponentReport(
        largest_size=largest,
        n_components=sum(hist.values()),
        size_histogram=hist,
        giant_fraction_sim=largest / graph.n_nodes if graph.n_nodes else 0.0,
    )
