"""Undirected self-looped graphs: constructors, matrices, conductance, diameters.

Vertices are 0-based integers internally; the JSON interchange format is
1-based with self-loops implied.  Every graph in this package carries a
self-loop at each vertex, so degrees are always >= 1 and the row-normalized
adjacency matrix is well defined.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    DisconnectedGraph,
    EmptyVertexSet,
    GraphFormatError,
    GraphTooLarge,
)

CONDUCTANCE_CAP = 24


def _canonical(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i <= j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph on ``n`` vertices with all self-loops.

    ``edges`` stores unordered pairs ``(i, j)`` with ``i <= j``, including
    every loop ``(i, i)``.  Construction validates symmetry implicitly (pairs
    are canonicalized) and adds any missing loops.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        canon = set()
        for i, j in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) out of range for n={self.n}")
            canon.add(_canonical(i, j))
        canon.update((i, i) for i in range(self.n))
        object.__setattr__(self, "edges", frozenset(canon))

    # -- basic queries ---------------------------------------------------

    def has_edge(self, i: int, j: int) -> bool:
        return _canonical(i, j) in self.edges

    def neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if self.has_edge(i, j))

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    @property
    def degrees(self) -> np.ndarray:
        adj = self.adjacency_matrix()
        return adj.sum(axis=1).astype(int)

    def adjacency_matrix(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n))
        for i, j in self.edges:
            adj[i, j] = 1.0
            adj[j, i] = 1.0
        return adj

    def nonloop_edges(self) -> list[tuple[int, int]]:
        return sorted((i, j) for i, j in self.edges if i != j)

    def is_complete(self) -> bool:
        return len(self.edges) == self.n + self.n * (self.n - 1) // 2

    # -- connectivity ----------------------------------------------------

    def components(self) -> list[tuple[int, ...]]:
        """Connected components as sorted vertex tuples, ordered by minimum vertex."""
        seen = [False] * self.n
        comps = []
        adj = {i: [] for i in range(self.n)}
        for i, j in self.edges:
            if i != j:
                adj[i].append(j)
                adj[j].append(i)
        for s in range(self.n):
            if seen[s]:
                continue
            stack, comp = [s], []
            seen[s] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(tuple(sorted(comp)))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1


# -- matrices -------------------------------------------------------------


def degree_matrix(g: Graph) -> np.ndarray:
    """Diagonal matrix of degrees, each self-loop counted once."""
    return np.diag(g.degrees.astype(float))


def normalized_adjacency(g: Graph) -> np.ndarray:
    """Row-stochastic matrix D^{-1} A_adj; rows sum to 1."""
    adj = g.adjacency_matrix()
    deg = adj.sum(axis=1)
    return adj / deg[:, None]


# -- conductance ----------------------------------------------------------


def conductance(g: Graph) -> tuple[float, frozenset]:
    """Exact conductance of a connected graph, with a minimizing vertex set.

    Minimizes |boundary(S)| / min(d(S), d(complement)) over nonempty proper
    subsets S by exhaustive enumeration.  Boundary edges are counted once per
    unordered crossing pair; self-loops contribute to d(S) but never cross.
    Refuses graphs with more than 24 vertices.
    """
    if g.n > CONDUCTANCE_CAP:
        raise GraphTooLarge(g.n, CONDUCTANCE_CAP)
    if g.n < 2:
        raise ValueError("conductance needs at least two vertices")
    if not g.is_connected():
        raise DisconnectedGraph("conductance is defined here for connected graphs")

    deg = g.degrees
    total = int(deg.sum())
    # Bitmask of non-loop neighbors per vertex.
    nbr = [0] * g.n
    for i, j in g.nonloop_edges():
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i

    best = None
    best_mask = 0
    # S and its complement give the same ratio, so fix vertex 0 in S.
    for rest in range(1 << (g.n - 1)):
        mask = (rest << 1) | 1
        if mask == (1 << g.n) - 1:
            continue
        d_s = 0
        cut = 0
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            d_s += deg[v]
            cut += bin(nbr[v] & ~mask).count("1")
        ratio = cut / min(d_s, total - d_s)
        if best is None or ratio < best:
            best = ratio
            best_mask = mask
    witness = frozenset(v for v in range(g.n) if best_mask >> v & 1)
    return best, witness


# -- distances ------------------------------------------------------------


def _bfs_ecc(g: Graph, source: int, adj: dict) -> dict:
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist

def effective_diameter(g: Graph) -> int:
    """Largest diameter over connected components; self-loops ignored."""
    adj = {i: [] for i in range(g.n)}
    for i, j in g.nonloop_edges():
        adj[i].append(j)
        adj[j].append(i)
    best = 0
    for comp in g.components():
        for v in comp:
            dist = _bfs_ecc(g, v, adj)
            best = max(best, max(dist.values()))
    return best


def diameter(g: Graph) -> int:
    """Diameter of a connected graph (shortest-path metric, loops ignored)."""
    if not g.is_connected():
        raise DisconnectedGraph("diameter requires a connected graph")
    return effective_diameter(g)


# -- constructors ---------------------------------------------------------


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        return path_graph(n)
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def star_graph(n: int) -> Graph:
    """Star with center 0 and n-1 leaves."""
    return Graph(n, frozenset((0, i) for i in range(1, n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(n), 2)))


def dumbbell_graph(n: int) -> Graph:
    """Two cliques of size floor(n/2) joined by one edge.

    For odd n the leftover vertex joins the first clique.
    """
    if n < 2:
        raise ValueError("dumbbell needs at least two vertices")
    half = n // 2
    left = list(range(half + (n % 2)))
    right = list(range(len(left), n))
    edges = set(combinations(left, 2)) | set(combinations(right, 2))
    edges.add((left[-1], right[0]))
    return Graph(n, frozenset(edges))


_STANDARD = {
    "path": path_graph,
    "cycle": cycle_graph,
    "star": star_graph,
    "complete": complete_graph,
    "dumbbell": dumbbell_graph,
}


def standard_graph(name: str, n: int) -> Graph:
    """Named constructor dispatch: path, cycle, star, complete, dumbbell."""
    try:
        ctor = _STANDARD[name]
    except KeyError:
        raise ValueError(f"unknown graph family {name!r}; choose from {sorted(_STANDARD)}")
    return ctor(n)


@dataclass(frozen=True)
class PartiteSpec:
    """Sizes of the parts of a complete multipartite graph."""

    part_sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.part_sizes)
        if len(sizes) < 1 or any(s < 1 for s in sizes):
            raise ValueError("part sizes must be positive integers")
        object.__setattr__(self, "part_sizes", sizes)

    @property
    def n(self) -> int:
        return sum(self.part_sizes)

    @property
    def r(self) -> int:
        return len(self.part_sizes)

    def parts(self) -> list[tuple[int, ...]]:
        """Vertex blocks: part i holds the next ``part_sizes[i]`` consecutive vertices."""
        out, start = [], 0
        for s in self.part_sizes:
            out.append(tuple(range(start, start + s)))
            start += s
        return out


def complete_r_partite(spec: PartiteSpec) -> Graph:
    """Complete multipartite graph: edges join vertices of different parts."""
    part_of = {}
    for idx, block in enumerate(spec.parts()):
        for v in block:
            part_of[v] = idx
    edges = frozenset(
        (u, v) for u, v in combinations(range(spec.n), 2) if part_of[u] != part_of[v]
    )
    return Graph(spec.n, edges)


# -- subgraphs ------------------------------------------------------------


def induced_subgraph(g: Graph, vertices) -> tuple[Graph, tuple[int, ...]]:
    """Subgraph induced on ``vertices`` plus the map from local to global index.

    Local vertex k corresponds to the k-th smallest global vertex.  Self-loops
    are retained, so the result is again a valid self-looped graph.
    """
    vs = sorted(set(vertices))
    if not vs:
        raise EmptyVertexSet("induced subgraph needs at least one vertex")
    if vs[0] < 0 or vs[-1] >= g.n:
        raise ValueError("vertex out of range")
    local = {v: k for k, v in enumerate(vs)}
    edges = frozenset(
        (local[i], local[j]) for i, j in g.edges if i in local and j in local
    )
    return Graph(len(vs), edges), tuple(vs)


# -- JSON interchange ------------------------------------------------------


def graph_to_json(g: Graph) -> str:
    """Serialize with 1-based indices; self-loops are implied and omitted."""
    payload = {"n": g.n, "edges": [[i + 1, j + 1] for i, j in g.nonloop_edges()]}
    return json.dumps(payload)


def graph_from_json(text: str) -> Graph:
    """Parse the 1-based format, adding self-loops and rejecting bad pairs."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "n" not in payload or "edges" not in payload:
        raise GraphFormatError("expected an object with 'n' and 'edges'")
    n = payload["n"]
    if not isinstance(n, int) or n < 1:
        raise GraphFormatError("'n' must be a positive integer")
    seen = set()
    edges = set()
    for pair in payload["edges"]:
        if not (isinstance(pair, list) and len(pair) == 2):
            raise GraphFormatError(f"edge {pair!r} is not a pair")
        i, j = pair
        if not (isinstance(i, int) and isinstance(j, int)):
            raise GraphFormatError(f"edge {pair!r} has non-integer endpoints")
        if not (1 <= i <= n and 1 <= j <= n):
            raise GraphFormatError(f"edge {pair!r} out of range for n={n}")
        if i == j:
            raise GraphFormatError(f"self-loop {pair!r} must not be listed; loops are implied")
        key = _canonical(i - 1, j - 1)
        if key in seen:
            raise GraphFormatError(f"duplicate edge {pair!r}")
        seen.add(key)
        edges.add(key)
    return Graph(n, frozenset(edges))
