"""Undirected simple graphs, structural measures, and the walk Hamiltonian.

Node labels are 1-based everywhere in the public API. Arrays indexed by node
use position ``label - 1``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

UNREACHABLE = -1


class GraphError(ValueError):
    """Invalid graph construction input."""


class DegenerateGraphError(ValueError):
    """Raised when a graph violates a precondition of the Hamiltonian."""

    def __init__(self, node: int, message: str):
        super().__init__(message)
        self.node = node


@dataclass(frozen=True, eq=False)
class Graph:
    n_nodes: int
    # 0-based pairs (u, v) with u <= v, sorted
    edges: tuple[tuple[int, int], ...]
    allow_self_edges: bool = False
    adjacency: np.ndarray = field(repr=False, default=None)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1).astype(np.int64)

    @property
    def labels(self) -> range:
        return range(1, self.n_nodes + 1)

    def index(self, label: int) -> int:
        """Map a 1-based label to its internal index."""
        label = int(label)
        if not 1 <= label <= self.n_nodes:
            raise GraphError(f"node {label} out of range [1, {self.n_nodes}]")
        return label - 1

    def neighbors(self, label: int) -> list[int]:
        i = self.index(label)
        return [int(j) + 1 for j in np.flatnonzero(self.adjacency[i])]

    def edge_labels(self) -> list[tuple[int, int]]:
        """Edges as sorted 1-based pairs."""
        return [(u + 1, v + 1) for u, v in self.edges]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n_nodes == other.n_nodes
            and self.edges == other.edges
            and self.allow_self_edges == other.allow_self_edges
        )

    def __hash__(self) -> int:
        return hash((self.n_nodes, self.edges, self.allow_self_edges))


def build_graph(
    n_nodes: int,
    edge_list: Iterable[tuple[int, int]],
    allow_self_edges: bool = False,
) -> Graph:
    """Build a graph from 1-based node pairs.

    Duplicate pairs (in either orientation), out-of-range labels, and
    self-pairs without ``allow_self_edges`` raise :class:`GraphError`.
    """
    if int(n_nodes) != n_nodes or n_nodes < 1:
        raise GraphError(f"n_nodes must be a positive integer, got {n_nodes}")
    n_nodes = int(n_nodes)
    seen: set[tuple[int, int]] = set()
    for pair in edge_list:
        u, v = (int(x) for x in pair)
        for x in (u, v):
            if not 1 <= x <= n_nodes:
                raise GraphError(f"node {x} out of range [1, {n_nodes}]")
        if u == v and not allow_self_edges:
            raise GraphError(f"self-edge ({u}, {v}) not allowed")
        key = (min(u, v) - 1, max(u, v) - 1)
        if key in seen:
            raise GraphError(f"duplicate edge ({u}, {v})")
        seen.add(key)

    edges = tuple(sorted(seen))
    adjacency = np.zeros((n_nodes, n_nodes), dtype=np.int8)
    for u, v in edges:
        adjacency[u, v] = 1
        adjacency[v, u] = 1
    adjacency.setflags(write=False)
    return Graph(n_nodes, edges, bool(allow_self_edges), adjacency)


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    matrix: np.ndarray
    source_graph: Graph

    @property
    def n_nodes(self) -> int:
        return self.matrix.shape[0]


def hamiltonian(g: Graph) -> Hamiltonian:
    """Symmetric normalized Laplacian ``D^-1/2 (D - A) D^-1/2``."""
    k = g.degrees.astype(float)
    zero = np.flatnonzero(k == 0)
    if zero.size:
        node = int(zero[0]) + 1
        raise DegenerateGraphError(
            node, f"node {node} has degree 0; D^-1/2 is undefined"
        )
    a = g.adjacency.astype(float)
    # outer(k, k) is exactly symmetric, so H is symmetric without post-hoc fixes
    h = -a / np.sqrt(np.outer(k, k))
    h[np.diag_indices_from(h)] = (k - np.diag(a)) / k
    h.setflags(write=False)
    return Hamiltonian(h, g)


def local_clustering(g: Graph, i: int) -> float:
    """Fraction of neighbor pairs of node ``i`` that are adjacent (0 if degree < 2)."""
    idx = g.index(i)
    nbrs = [j for j in np.flatnonzero(g.adjacency[idx]) if j != idx]
    k = len(nbrs)
    if k < 2:
        return 0.0
    sub = g.adjacency[np.ix_(nbrs, nbrs)].astype(np.int64)
    links = (sub.sum() - np.trace(sub)) // 2
    return float(links) / (k * (k - 1) / 2)


def mean_clustering(g: Graph) -> float:
    return float(np.mean([local_clustering(g, i) for i in g.labels]))


def _bfs(g: Graph, source: int) -> np.ndarray:
    dist = np.full(g.n_nodes, UNREACHABLE, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(g.adjacency[u]):
            if dist[v] == UNREACHABLE:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def geodesic_distance(g: Graph, i: int, j: int) -> int:
    """Hop count between ``i`` and ``j``; :data:`UNREACHABLE` if disconnected."""
    return int(_bfs(g, g.index(i))[g.index(j)])


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted lists of 1-based labels, ordered by smallest label."""
    seen = np.zeros(g.n_nodes, dtype=bool)
    components = []
    for s in range(g.n_nodes):
        if seen[s]:
            continue
        members = np.flatnonzero(_bfs(g, s) != UNREACHABLE)
        seen[members] = True
        components.append([int(m) + 1 for m in members])
    return components


def is_connected(g: Graph) -> bool:
    return bool(np.all(_bfs(g, 0) != UNREACHABLE))


def disjoint_union(*graphs: Graph) -> Graph:
    """Place graphs side by side, relabeling consecutively."""
    offset = 0
    edges = []
    for h in graphs:
        edges.extend((u + offset, v + offset) for u, v in h.edge_labels())
        offset += h.n_nodes
    return build_graph(offset, edges, any(h.allow_self_edges for h in graphs))
