"""Immutable connected graphs with precomputed metric data."""
from __future__ import annotations

from collections import deque
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from . import vertexset as vs


class GraphError(ValueError):
    """Raised for malformed or unsupported graph input."""


class DomainError(ValueError):
    """Raised when an operation's precondition on its input does not hold."""


class Graph:
    """Undirected simple connected graph on vertices ``0..n-1``.

    ``labels`` keep the names used at ingestion; ``meta`` carries
    family-specific data such as grid coordinates or interval orders.
    """

    __slots__ = ("n", "edges", "adj", "closed", "nbrs", "dist", "labels", "meta",
                 "_balls", "_ntable")

    def __init__(self, n: int, edges: Iterable[Sequence[int]],
                 labels: Sequence[str] | None = None,
                 meta: Mapping[str, Any] | None = None):
        if n < 1:
            raise GraphError("graph must have at least one vertex")
        adj = [0] * n
        seen = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                continue
            seen.add(key)
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self.edges = tuple(sorted(seen))
        self.adj = tuple(adj)
        self.closed = tuple(a | (1 << v) for v, a in enumerate(adj))
        self.nbrs = tuple(tuple(vs.members(a)) for a in adj)
        if labels is None:
            labels = [str(v) for v in range(n)]
        if len(labels) != n:
            raise GraphError(f"expected {n} labels, got {len(labels)}")
        self.labels = tuple(str(x) for x in labels)
        self.meta = dict(meta or {})
        self.dist = self._all_pairs()
        self._balls: dict[int, tuple[int, ...]] = {}
        self._ntable: tuple[tuple[int, ...], ...] | None = None

    def _all_pairs(self) -> np.ndarray:
        n = self.n
        dist = np.full((n, n), -1, dtype=np.int32)
        for s in range(n):
            row = dist[s]
            row[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                du = row[u] + 1
                for w in self.nbrs[u]:
                    if row[w] < 0:
                        row[w] = du
                        queue.append(w)
            if s == 0 and (row < 0).any():
                missing = int(np.flatnonzero(row < 0)[0])
                raise GraphError(f"graph is disconnected (vertex {self.labels[missing]} "
                                 "unreachable from vertex 0)")
        dist.flags.writeable = False
        return dist

    # -- basic queries -----------------------------------------------------

    def __repr__(self) -> str:
        name = self.meta.get("name")
        tag = f" {name}" if name else ""
        return f"<Graph{tag} n={self.n} m={len(self.edges)}>"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Graph) and self.n == other.n
                and self.edges == other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def all(self) -> int:
        return vs.full(self.n)

    def degree(self, v: int) -> int:
        return len(self.nbrs[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (self.adj[u] >> v) & 1 == 1

    def d(self, u: int, v: int) -> int:
        return int(self.dist[u, v])

    def balls(self, rho: int) -> tuple[int, ...]:
        """Masks of ``B_rho(v)`` for every vertex ``v`` (cached per radius)."""
        if rho < 0:
            raise DomainError(f"radius must be non-negative, got {rho}")
        cached = self._balls.get(rho)
        if cached is None:
            cached = tuple(int(vs.from_iter(np.flatnonzero(row <= rho).tolist()))
                           for row in self.dist)
            self._balls[rho] = cached
        return cached

    def neighborhood_table(self) -> tuple[tuple[int, ...], ...]:
        """Per-byte lookup tables: ``table[k][b]`` is ``N[S]`` for the byte ``b`` at chunk ``k``."""
        if self._ntable is None:
            chunks = []
            for k in range(0, self.n, 8):
                width = min(8, self.n - k)
                table = [0] * 256
                for b in range(1, 1 << width):
                    low = b & -b
                    table[b] = table[b ^ low] | self.closed[k + low.bit_length() - 1]
                chunks.append(tuple(table))
            self._ntable = tuple(chunks)
        return self._ntable

    # -- derived graphs ----------------------------------------------------

    def with_edges(self, extra: Iterable[Sequence[int]], **meta: Any) -> "Graph":
        merged = dict(self.meta)
        merged.update(meta)
        return Graph(self.n, list(self.edges) + [tuple(e) for e in extra], self.labels, merged)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabelling must be a permutation of the vertices")
        labels = [""] * self.n
        for v, p in enumerate(perm):
            labels[p] = self.labels[v]
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges], labels)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph; vertex ``vertices[i]`` becomes ``i``. Must be connected."""
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(vertices), edges, [self.labels[v] for v in vertices],
                     {"parent_vertices": list(vertices)})


# -- operations --------------------------------------------------------------

def ball(g: Graph, v: int, rho: int) -> int:
    """Vertices at distance at most ``rho`` from ``v``."""
    if not 0 <= v < g.n:
        raise DomainError(f"vertex {v} not in graph")
    return g.balls(rho)[v]


def closed_neighborhood(g: Graph, s: int) -> int:
    """``N[S]`` as a mask: ``S`` plus every neighbour of a vertex in ``S``."""
    table = g.neighborhood_table()
    out = 0
    k = 0
    while s:
        b = s & 0xFF
        if b:
            out |= table[k][b]
        s >>= 8
        k += 1
    return out


def validate_walk(g: Graph, walk: Sequence[int]) -> bool:
    if len(walk) == 0:
        return False
    for v in walk:
        if not (isinstance(v, (int, np.integer)) and 0 <= v < g.n):
            return False
    return all(g.dist[a, b] <= 1 for a, b in zip(walk, walk[1:]))


def is_tree(g: Graph) -> bool:
    return len(g.edges) == g.n - 1


def eccentricity(g: Graph, v: int) -> int:
    return int(g.dist[v].max())


def graph_radius(g: Graph) -> int:
    return int(g.dist.max(axis=1).min())


def diameter(g: Graph) -> int:
    return int(g.dist.max())


def centers(g: Graph) -> list[int]:
    ecc = g.dist.max(axis=1)
    return np.flatnonzero(ecc == ecc.min()).tolist()


def is_caterpillar(g: Graph) -> bool:
    """Tree whose non-leaf vertices induce a path (possibly empty)."""
    if not is_tree(g):
        return False
    inner = [v for v in g.vertices if g.degree(v) > 1]
    inner_mask = vs.from_iter(inner)
    for v in inner:
        if (g.adj[v] & inner_mask).bit_count() > 2:
            return False
    return True


def shortest_path(g: Graph, source: int, target: int, allowed: int | None = None) -> list[int]:
    """Shortest path ``source .. target`` inside ``allowed`` (all vertices by default).

    Ties are broken by vertex index so the result is deterministic.
    """
    if allowed is None:
        allowed = g.all
    if not (vs.contains(allowed, source) and vs.contains(allowed, target)):
        raise DomainError("path endpoints must lie in the allowed vertex set")
    if allowed == g.all:
        dist_t = g.dist[target]
        path = [source]
        while path[-1] != target:
            u = path[-1]
            path.append(min(w for w in g.nbrs[u] if dist_t[w] == dist_t[u] - 1))
        return path
    parent = {target: target}
    queue = deque([target])
    while queue:
        u = queue.popleft()
        if u == source:
            break
        for w in g.nbrs[u]:
            if w not in parent and vs.contains(allowed, w):
                parent[w] = u
                queue.append(w)
    if source not in parent:
        raise DomainError(f"no path from {source} to {target} inside the allowed set")
    path = [source]
    while path[-1] != target:
        path.append(parent[path[-1]])
    return path


def longest_path_in_tree(g: Graph) -> list[int]:
    """A diametral path found by two breadth-first sweeps (lowest index on ties)."""
    if not is_tree(g):
        raise DomainError("longest_path_in_tree needs a tree")
    a = int(np.argmax(g.dist[0]))
    b = int(np.argmax(g.dist[a]))
    return shortest_path(g, a, b)


def is_chordal(g: Graph) -> bool:
    """Maximum cardinality search followed by a perfect-elimination check."""
    n = g.n
    weight = [0] * n
    numbered = 0
    order = []
    for _ in range(n):
        v = max((u for u in range(n) if not vs.contains(numbered, u)),
                key=lambda u: (weight[u], -u))
        order.append(v)
        numbered |= 1 << v
        for w in g.nbrs[v]:
            if not vs.contains(numbered, w):
                weight[w] += 1
    # Reverse of an MCS order is a perfect elimination ordering iff g is chordal.
    position = {v: i for i, v in enumerate(order)}
    for v in order:
        earlier = [w for w in g.nbrs[v] if position[w] < position[v]]
        if not earlier:
            continue
        parent = max(earlier, key=position.__getitem__)
        rest = vs.from_iter(w for w in earlier if w != parent)
        if rest & ~g.adj[parent]:
            return False
    return True
