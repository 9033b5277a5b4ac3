"""Undirected simple connected graphs for the synchronization experiments.

Supports Erdos-Renyi G(n,p) samples (rejected until connected), Barabasi-Albert
preferential-attachment trees/graphs grown from a single edge, and a few fixed
topologies used by the tests (complete, path, star, explicit edge list).
All generation is deterministic given the recipe seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np


class GraphError(Exception):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph. Nodes are 0..n-1; edges stored with i < j."""

    n: int
    edges: Tuple[Tuple[int, int], ...]
    neighbors: Tuple[Tuple[int, ...], ...] = field(repr=False, default=())

    def __post_init__(self):
        nbrs = [[] for _ in range(self.n)]
        for i, j in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise GraphError(f"edge ({i},{j}) out of range for n={self.n}")
            if i == j:
                raise GraphError(f"self-loop at node {i}")
            if i > j:
                raise GraphError(f"edge ({i},{j}) not stored with i<j")
            nbrs[i].append(j)
            nbrs[j].append(i)
        for i in range(self.n):
            if len(set(nbrs[i])) != len(nbrs[i]):
                raise GraphError(f"duplicate edge at node {i}")
        object.__setattr__(self, "neighbors", tuple(tuple(sorted(v)) for v in nbrs))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> np.ndarray:
        return np.array([len(v) for v in self.neighbors], dtype=np.int64)

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.float64)
        for i, j in self.edges:
            A[i, j] = 1.0
            A[j, i] = 1.0
        return A

    def edge_array(self) -> np.ndarray:
        """(m, 2) int array of undirected edges, i < j, sorted."""
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array(sorted(self.edges), dtype=np.int64)

    def directed_edges(self) -> np.ndarray:
        """(2m, 2) array listing both orientations, sorted lexicographically."""
        und = self.edge_array()
        both = np.vstack([und, und[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        return both[order]


@dataclass(frozen=True)
class GraphRecipe:
    """Recipe fully determining a graph: kind + parameters + RNG seed."""

    kind: str  # "er" | "ba" | "explicit" | "complete" | "path" | "star"
    n: int
    p: Optional[float] = None
    m0: Optional[int] = None
    edges: Optional[Tuple[Tuple[int, int], ...]] = None
    seed: int = 0
    connect_retries: int = 100


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian L = D - A (dense, symmetric, zero row sums)."""
    A = g.adjacency()
    return np.diag(A.sum(axis=1)) - A


def is_connected(g: Graph) -> bool:
    """BFS from node 0 reaches every node."""
    if g.n == 0:
        return False
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        u = stack.pop()
        for v in g.neighbors[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return bool(seen.all())


def _gen_er(n: int, p: float, rng: np.random.Generator) -> Graph:
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < p
    edges = tuple((int(a), int(b)) for a, b in zip(iu[mask], ju[mask]))
    return Graph(n=n, edges=edges)


def _gen_ba(n: int, m0: int, rng: np.random.Generator) -> Graph:
    """Preferential attachment grown from a single edge.

    Each new node attaches to m0 distinct existing nodes, chosen with
    probability proportional to current degree (cumulative-sum inversion,
    without replacement). m0 = 1 yields a random recursive tree.
    """
    if n < 2:
        raise GraphError("BA graph needs n >= 2")
    deg = np.zeros(n, dtype=np.float64)
    deg[0] = deg[1] = 1.0
    edges = [(0, 1)]
    for t in range(2, n):
        k = min(m0, t)
        avail = deg[:t].copy()
        targets = []
        for _ in range(k):
            cum = np.cumsum(avail)
            u = rng.random() * cum[-1]
            j = int(np.searchsorted(cum, u, side="right"))
            targets.append(j)
            avail[j] = 0.0  # without replacement
        for j in targets:
            edges.append((j, t))
            deg[j] += 1.0
            deg[t] += 1.0
    return Graph(n=n, edges=tuple(edges))


def generate(recipe: GraphRecipe) -> Graph:
    """Build the graph described by the recipe. Deterministic given the seed.

    ER samples that come out disconnected are rejected and resampled, up to
    recipe.connect_retries times.
    """
    kind = recipe.kind.lower()
    n = recipe.n
    if kind == "explicit":
        if recipe.edges is None:
            raise GraphError("explicit recipe needs an edge list")
        norm = tuple((min(i, j), max(i, j)) for i, j in recipe.edges)
        return Graph(n=n, edges=norm)
    if kind == "complete":
        return Graph(n=n, edges=tuple((i, j) for i in range(n) for j in range(i + 1, n)))
    if kind == "path":
        return Graph(n=n, edges=tuple((i, i + 1) for i in range(n - 1)))
    if kind == "star":
        return Graph(n=n, edges=tuple((0, i) for i in range(1, n)))
    if kind == "er":
        if recipe.p is None or not (0.0 < recipe.p <= 1.0):
            raise GraphError("ER recipe needs p in (0, 1]")
        rng = np.random.default_rng(recipe.seed)
        for _ in range(recipe.connect_retries):
            g = _gen_er(n, recipe.p, rng)
            if is_connected(g):
                return g
        raise GraphError(f"disconnected after {recipe.connect_retries} retries")
    if kind == "ba":
        m0 = recipe.m0 if recipe.m0 is not None else 1
        if m0 < 1:
            raise GraphError("BA recipe needs m0 >= 1")
        rng = np.random.default_rng(recipe.seed)
        return _gen_ba(n, m0, rng)
    raise GraphError(f"unknown graph kind: {recipe.kind!r}")


def write_edgelist(g: Graph, path) -> None:
    """Write "n m" header then one "i j" line per edge, 1-based, i < j, LF."""
    lines = [f"{g.n} {g.m}\n"]
    for i, j in sorted(g.edges):
        lines.append(f"{i + 1} {j + 1}\n")
    with open(path, "w", newline="\n") as fh:
        fh.writelines(lines)


def read_edgelist(path) -> Graph:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise GraphError("bad edge-list header, expected 'n m'")
        n, m = int(header[0]), int(header[1])
        edges = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            a, b = line.split()
            edges.append((int(a) - 1, int(b) - 1))
    if len(edges) != m:
        raise GraphError(f"edge count mismatch: header says {m}, found {len(edges)}")
    return Graph(n=n, edges=tuple(edges))
