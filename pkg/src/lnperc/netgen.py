"""Random channel graphs under the fitness kernel.

Two constructions are provided: independent Bernoulli edges per pair
(:func:`generate_graph`) and sequential deposition of a fixed number of
links (:func:`generate_graph_deposition`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .distributions import NodePopulation
from .params import InfeasibleError, KernelKind, ModelParams, ParameterError
from .rng import generator


@dataclass(frozen=True)
class KernelSpec:
    """Attachment kernel ``N f(x, y) = mu * theta(x) * theta(y) * s(x, y)``
    where ``theta(x) = [x phi > c]`` and ``s`` is 1, ``xy / (1 + xy)`` or
    ``1 - exp(-(x + y))`` depending on ``kind``."""

    kind: KernelKind
    c: float
    phi: float
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))
        if self.phi <= 0:
            raise ParameterError("phi", "must be > 0")
        if self.mu <= 0:
            raise ParameterError("mu", "must be > 0")

    @classmethod
    def from_params(cls, params: ModelParams) -> KernelSpec:
        return cls(params.kernel_kind, params.c, params.phi, params.mu)

    def viable(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) * self.phi > self.c

    def smooth_factor(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.kind is KernelKind.SMOOTH_PRODUCT:
            xy = x * y
            return xy / (1.0 + xy)
        if self.kind is KernelKind.SMOOTH_EXP:
            return -np.expm1(-(x + y))
        return np.ones(np.broadcast(x, y).shape)

    def __call__(self, x, y) -> np.ndarray:
        """``N f(x, y)``, the scaled edge probability, in ``[0, mu]``."""
        return self.mu * self.viable(x) * self.viable(y) * self.smooth_factor(x, y)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph in CSR form with sorted neighbour lists."""

    n_nodes: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False

    @classmethod
    def from_edges(cls, n_nodes: int, u, v) -> Graph:
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        dtype = np.int32 if n_nodes < 2**31 else np.int64
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n_nodes + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n_nodes), out=indptr[1:])
        return cls(n_nodes, indptr, dst.astype(dtype))

    @property
    def n_edges(self) -> int:
        return len(self.indices) // 2

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    @property
    def adjacency(self) -> list[list[int]]:
        idx = self.indices.tolist()
        ptr = self.indptr.tolist()
        return [idx[ptr[i] : ptr[i + 1]] for i in range(self.n_nodes)]

    def edges(self) -> np.ndarray:
        """``(M, 2)`` array of ``i < j`` pairs in ascending order."""
        src = np.repeat(np.arange(self.n_nodes), self.degrees())
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]]).astype(np.int64)

    def validate(self) -> None:
        """Full scan for symmetry, self-loops and duplicate edges."""
        if len(self.indptr) != self.n_nodes + 1 or self.indptr[0] != 0 or self.indptr[-1] != len(self.indices):
            raise ValueError("malformed indptr")
        src = np.repeat(np.arange(self.n_nodes), self.degrees())
        if np.any(src == self.indices):
            raise ValueError("self-loop")
        if len(self.indices) and (self.indices.min() < 0 or self.indices.max() >= self.n_nodes):
            raise ValueError("neighbour index out of range")
        key = src * self.n_nodes + self.indices
        if np.any(np.diff(key) <= 0):
            raise ValueError("neighbour lists unsorted or duplicated")
        rkey = self.indices.astype(np.int64) * self.n_nodes + src
        if not np.array_equal(np.sort(rkey), key):
            raise ValueError("adjacency not symmetric")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n_nodes == other.n_nodes
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )


def _pair_from_index(idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert ``idx = j (j - 1) / 2 + i`` for ``0 <= i < j``."""
    j = np.floor((1.0 + np.sqrt(1.0 + 8.0 * idx.astype(float))) / 2.0).astype(np.int64)
    j -= (j * (j - 1) // 2) > idx
    j += ((j + 1) * j // 2) <= idx
    return idx - j * (j - 1) // 2, j


def er_pairs(n: int, p: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Edges of G(n, p) by geometric skipping over the linearised pairs.

    Cost is proportional to the number of edges drawn, never to ``n**2``.
    """
    total = n * (n - 1) // 2
    if total == 0 or p <= 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    if p >= 1:
        idx = np.arange(total, dtype=np.int64)
        return _pair_from_index(idx)
    expected = total * p
    # cap keeps batch * total inside int64
    cap = max(16, (1 << 62) // total)
    batch = min(cap, int(expected + 5.0 * math.sqrt(expected) + 16))
    chunks = []
    last = -1
    while True:
        pos = last + np.cumsum(np.minimum(rng.geometric(p, size=batch), total))
        inside = pos[pos < total]
        chunks.append(inside)
        if len(inside) < len(pos):
            break
        last = int(pos[-1])
        batch = max(16, batch // 4)
    return _pair_from_index(np.concatenate(chunks))


def _edge_probability(kernel: KernelSpec, n_nodes: int) -> float:
    p = kernel.mu / n_nodes
    if p > 1.0:
        raise ParameterError("mu", f"edge probability mu/N = {p} exceeds 1")
    return p


def generate_graph(pop: NodePopulation, kernel: KernelSpec, seed: int) -> Graph:
    """Independent edges with probability ``f(x_i, x_j)`` per pair.

    Candidates are Erdos-Renyi pairs among viable nodes at ``mu / N``; for
    smoothed kernels each candidate is then kept with the smooth factor.
    """
    n = pop.n_nodes
    p = _edge_probability(kernel, n)
    rng = generator(seed)
    high = np.flatnonzero(kernel.viable(pop.fitness))
    a, b = er_pairs(len(high), p, rng)
    u, v = high[a], high[b]
    if kernel.kind is not KernelKind.HARD and len(u):
        keep = rng.random(len(u)) < kernel.smooth_factor(pop.fitness[u], pop.fitness[v])
        u, v = u[keep], v[keep]
    return Graph.from_edges(n, u, v)


def generate_graph_deposition(pop: NodePopulation, kernel: KernelSpec, n_edges: int, seed: int) -> Graph:
    """Place exactly ``n_edges`` distinct links one after another.

    Each link joins two viable nodes drawn independently and uniformly (for
    smoothed kernels the pair is then accepted with the smooth factor).
    Self-loops and repeats are redrawn.  Draws are made in vectorised
    batches but consumed strictly in order, so the outcome is that of the
    one-at-a-time process.
    """
    n = pop.n_nodes
    if n_edges < 0:
        raise ValueError("n_edges must be non-negative")
    high = np.flatnonzero(kernel.viable(pop.fitness))
    h = len(high)
    admissible = h * (h - 1) // 2
    if n_edges > admissible:
        raise InfeasibleError(f"{n_edges} edges requested but only {admissible} admissible pairs")
    rng = generator(seed)
    placed = np.empty(0, dtype=np.int64)
    while len(placed) < n_edges:
        need = n_edges - len(placed)
        free = 1.0 - len(placed) / admissible
        batch = int(1.2 * need / max(free * (1.0 - 1.0 / h), 1e-3)) + 16
        a = rng.integers(0, h, size=batch)
        b = rng.integers(0, h, size=batch)
        ok = a != b
        if kernel.kind is not KernelKind.HARD:
            s = kernel.smooth_factor(pop.fitness[high[a]], pop.fitness[high[b]])
            ok &= rng.random(batch) < s
        lo = np.minimum(a, b)[ok]
        hi = np.maximum(a, b)[ok]
        keys = lo * h + hi
        _, first = np.unique(keys, return_index=True)
        first.sort()
        keys = keys[first]
        keys = keys[~np.isin(keys, placed)]
        placed = np.concatenate([placed, keys[:need]])
    if h == 0:
        return Graph.from_edges(n, placed, placed)
    return Graph.from_edges(n, high[placed // h], high[placed % h])


def write_edgelist(graph: Graph, path, seed: int) -> None:
    """Text dump: header ``# N=<n> M=<m> seed=<s>`` then ``i j`` per line."""
    lines = [f"# N={graph.n_nodes} M={graph.n_edges} seed={seed}"]
    lines.extend(f"{i} {j}" for i, j in graph.edges().tolist())
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_edgelist(path) -> tuple[Graph, int]:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    header = dict(tok.split("=", 1) for tok in text[0].lstrip("#").split())
    n, m, seed = int(header["N"]), int(header["M"]), int(header["seed"])
    pairs = np.array([ln.split() for ln in text[1:] if ln.strip()], dtype=np.int64).reshape(-1, 2)
    if len(pairs) != m:
        raise ValueError(f"header declares M={m} but file holds {len(pairs)} edges")
    return Graph.from_edges(n, pairs[:, 0], pairs[:, 1]), seed
