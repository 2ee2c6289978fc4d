"""Network generators: recursive triangles, rings, NWS, Kleinberg rings, Holme-Kim.

Random generators take an integer seed and are pure functions of their
arguments. Generated graphs are always simple: duplicate edges are never
emitted.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .graph import Graph, build_graph

MODELS = ("recursive_triangle", "ring", "nws", "kleinberg_ring", "holme_kim")
STOCHASTIC_MODELS = ("nws", "kleinberg_ring", "holme_kim")
SEED_MASK = (1 << 64) - 1
TRIAD_MODES = ("budget", "additive")


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class Generation:
    """Generation tags of a recursive triangle network (0 = base triangle)."""

    node: tuple[int, ...]
    edge: dict[tuple[int, int], int] = field(hash=False)

    def nodes_of(self, g: int) -> list[int]:
        return [i + 1 for i, gen in enumerate(self.node) if gen == g]


@dataclass(frozen=True)
class GeneratorSpec:
    model: str
    n: int | None = None
    depth: int | None = None
    p: float = 0.0
    q: int = 0
    alpha: float = 0.0
    p_triangle: float = 0.0
    m: int = 2
    allow_self_edges: bool = False
    resample: bool = False
    triad_mode: str = "budget"

    def __post_init__(self):
        model = normalize_model(self.model)
        object.__setattr__(self, "model", model)
        if model == "recursive_triangle":
            if self.depth is None or self.depth < 0:
                raise GeneratorError("recursive_triangle requires depth >= 0")
        elif self.n is None or self.n < 3:
            raise GeneratorError(f"{model} requires n >= 3")
        for name in ("p", "p_triangle"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise GeneratorError(f"{name} must lie in [0, 1], got {value}")
        if self.alpha < 0:
            raise GeneratorError(f"alpha must be >= 0, got {self.alpha}")
        if self.q < 0:
            raise GeneratorError(f"q must be >= 0, got {self.q}")
        if model == "holme_kim" and self.m != 2:
            raise GeneratorError("holme_kim supports m = 2 only")
        if self.triad_mode not in TRIAD_MODES:
            raise GeneratorError(f"triad_mode must be one of {TRIAD_MODES}")

    @property
    def stochastic(self) -> bool:
        return self.model in STOCHASTIC_MODELS

    @property
    def n_nodes(self) -> int:
        if self.model == "recursive_triangle":
            return 3 * 2**self.depth
        return self.n

    def to_dict(self) -> dict[str, Any]:
        """Only the parameters the model actually uses."""
        used = {
            "recursive_triangle": ("depth",),
            "ring": ("n",),
            "nws": ("n", "p"),
            "kleinberg_ring": ("n", "q", "alpha", "allow_self_edges", "resample"),
            "holme_kim": ("n", "m", "p_triangle", "triad_mode"),
        }[self.model]
        d = asdict(self)
        return {"model": self.model, **{k: d[k] for k in used}}


def normalize_model(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    aliases = {"kleinberg": "kleinberg_ring", "hk": "holme_kim", "triangle": "recursive_triangle"}
    key = aliases.get(key, key)
    if key not in MODELS:
        raise GeneratorError(f"unknown model {name!r}; expected one of {', '.join(MODELS)}")
    return key


def recursive_triangle(d: int) -> tuple[Graph, Generation]:
    """Attach one new node across every edge created in the previous generation."""
    if d < 0:
        raise GeneratorError(f"depth must be >= 0, got {d}")
    edges = [(1, 2), (2, 3), (3, 1)]
    node_gen = [0, 0, 0]
    edge_gen = {e: 0 for e in edges}
    previous = list(edges)
    for g in range(1, d + 1):
        created = []
        for u, v in previous:
            w = len(node_gen) + 1
            node_gen.append(g)
            created += [(w, u), (w, v)]
        for e in created:
            edge_gen[e] = g
        edges += created
        previous = created
    graph = build_graph(len(node_gen), edges)
    tags = {(min(u, v), max(u, v)): gen for (u, v), gen in edge_gen.items()}
    return graph, Generation(tuple(node_gen), tags)


def _ring_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i % n + 1) for i in range(1, n + 1)]


def ring(n: int) -> Graph:
    if n < 3:
        raise GeneratorError(f"ring requires n >= 3, got {n}")
    return build_graph(n, _ring_edges(n))


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & SEED_MASK))


class _EdgeSet:
    def __init__(self, edges):
        self.edges = list(edges)
        self.keys = {frozenset(e) for e in self.edges}

    def __contains__(self, pair) -> bool:
        return frozenset(pair) in self.keys

    def add(self, u: int, v: int) -> None:
        self.edges.append((u, v))
        self.keys.add(frozenset((u, v)))


def nws(n: int, p: float, seed: int) -> Graph:
    """Newman-Watts-Strogatz: ring plus, per ring edge (i, i+1), a shortcut from i w.p. p."""
    if n < 3:
        raise GeneratorError(f"nws requires n >= 3, got {n}")
    if not 0.0 <= p <= 1.0:
        raise GeneratorError(f"p must lie in [0, 1], got {p}")
    rng = _rng(seed)
    es = _EdgeSet(_ring_edges(n))
    for i, _ in _ring_edges(n):
        if rng.random() >= p:
            continue
        for _ in range(n):
            w = int(rng.integers(1, n + 1))
            if w != i and (i, w) not in es:
                es.add(i, w)
                break
    return build_graph(n, es.edges)


def ring_distance(n: int, i: int, j: int) -> int:
    delta = abs(i - j) % n
    return min(delta, n - delta)


def kleinberg_weights(n: int, i: int, alpha: float, allow_self_edges: bool = False) -> np.ndarray:
    """Unnormalized target weights over labels 1..n for source ``i``.

    The self target is excluded unless ``allow_self_edges``; it is then given
    the nearest-neighbor weight since d(i, i)^-alpha is singular.
    """
    labels = np.arange(1, n + 1)
    dist = np.abs(labels - i) % n
    dist = np.minimum(dist, n - dist).astype(float)
    w = np.zeros(n)
    mask = dist > 0
    w[mask] = dist[mask] ** (-alpha)
    if allow_self_edges:
        w[i - 1] = 1.0
    return w


def kleinberg_target(cdf: np.ndarray, u):
    """Map uniform variate(s) ``u`` to 1-based target labels via the weight CDF."""
    j = np.searchsorted(cdf, u, side="right") + 1
    return np.minimum(j, cdf.size)


def kleinberg_ring(
    n: int,
    q: int,
    alpha: float,
    seed: int,
    allow_self_edges: bool = False,
    resample: bool = False,
) -> Graph:
    """Ring plus ``q`` draws per node with target probability proportional to d^-alpha.

    By default a draw that lands on an existing edge (ring edges included) is
    simply dropped, so short-range draws at large alpha often add nothing.
    With ``resample`` such draws are retried up to N times instead.
    """
    if n < 3:
        raise GeneratorError(f"kleinberg_ring requires n >= 3, got {n}")
    if q < 0 or alpha < 0:
        raise GeneratorError("q and alpha must be >= 0")
    rng = _rng(seed)
    es = _EdgeSet(_ring_edges(n))
    attempts = n if resample else 1
    for i in range(1, n + 1):
        w = kleinberg_weights(n, i, alpha, allow_self_edges)
        cdf = np.cumsum(w / w.sum())
        for _ in range(q):
            for _ in range(attempts):
                j = int(kleinberg_target(cdf, rng.random()))
                if (i, j) not in es:
                    es.add(i, j)
                    break
    return build_graph(n, es.edges, allow_self_edges=allow_self_edges)


def _preferential_pair(rng: np.random.Generator, degrees: np.ndarray, m: int) -> list[int]:
    """Draw ``m`` distinct 0-based targets with probability proportional to degree.

    Sequential draws without replacement; uniform over the remaining
    candidates whenever their degrees are all zero.
    """
    candidates = list(range(len(degrees)))
    chosen = []
    for _ in range(min(m, len(candidates))):
        w = degrees[candidates].astype(float)
        if w.sum() == 0:
            k = int(rng.integers(len(candidates)))
        else:
            k = int(np.searchsorted(np.cumsum(w / w.sum()), rng.random(), side="right"))
            k = min(k, len(candidates) - 1)
        chosen.append(candidates.pop(k))
    return chosen


def holme_kim(
    n: int, p_triangle: float, seed: int, m: int = 2, triad_mode: str = "budget"
) -> Graph:
    """Holme-Kim growth from an empty dyad (two isolated nodes).

    Each new node draws two distinct preferential targets from the degrees
    before its arrival and links to the first. In ``"budget"`` mode, with
    probability ``p_triangle`` its second edge closes a triangle with a
    uniformly chosen neighbor of the first target (falling back to the second
    target when no neighbor is eligible), so every node brings exactly two
    edges. In ``"additive"`` mode both targets are always linked and each
    attachment edge may add one extra triangle edge.
    """
    if n < 3:
        raise GeneratorError(f"holme_kim requires n >= 3, got {n}")
    if m != 2:
        raise GeneratorError("holme_kim supports m = 2 only")
    if not 0.0 <= p_triangle <= 1.0:
        raise GeneratorError(f"p_triangle must lie in [0, 1], got {p_triangle}")
    if triad_mode not in TRIAD_MODES:
        raise GeneratorError(f"triad_mode must be one of {TRIAD_MODES}, got {triad_mode!r}")
    rng = _rng(seed)
    adj: list[set[int]] = [set(), set()]
    edges: list[tuple[int, int]] = []

    def link(v: int, u: int) -> None:
        adj[v].add(u)
        adj[u].add(v)
        edges.append((u + 1, v + 1))

    def triangle_partner(v: int, t: int, exclude) -> int | None:
        eligible = sorted(u for u in adj[t] if u != v and u not in adj[v] and u not in exclude)
        if not eligible:
            return None
        return eligible[int(rng.integers(len(eligible)))]

    for v in range(2, n):
        degrees = np.array([len(s) for s in adj])
        targets = _preferential_pair(rng, degrees, m)
        adj.append(set())
        if triad_mode == "budget":
            link(v, targets[0])
            if rng.random() < p_triangle:
                u = triangle_partner(v, targets[0], ())
                if u is not None:
                    link(v, u)
                    continue
            link(v, targets[1])
        else:
            for t in targets:
                link(v, t)
                if rng.random() < p_triangle:
                    u = triangle_partner(v, t, targets)
                    if u is not None:
                        link(v, u)
    return build_graph(n, edges)


def generate(spec: GeneratorSpec, seed: int | None = None) -> Graph:
    """Build the graph described by ``spec``; stochastic models require ``seed``."""
    if spec.stochastic and seed is None:
        raise GeneratorError(f"model {spec.model} requires a seed")
    if spec.model == "recursive_triangle":
        return recursive_triangle(spec.depth)[0]
    if spec.model == "ring":
        return ring(spec.n)
    if spec.model == "nws":
        return nws(spec.n, spec.p, seed)
    if spec.model == "kleinberg_ring":
        return kleinberg_ring(
            spec.n, spec.q, spec.alpha, seed, spec.allow_self_edges, spec.resample
        )
    return holme_kim(spec.n, spec.p_triangle, seed, spec.m, spec.triad_mode)
