"""Weak homomorphisms and retractions onto subgraphs, and the grid projections.

A weak homomorphism sends every edge to a pair of target vertices that are
equal or adjacent; distances on the target are measured inside the target
subgraph itself, not in the host graph.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .formulas import CLIQUE_TRIOD, LOWER, TRIOD, Prediction, lemma_lower_bound
from .graph import DomainError, Graph, GraphError


@dataclass(frozen=True)
class Subgraph:
    """Vertices of a host graph together with the graph they span and its own metric.

    ``graph`` vertex ``i`` stands for host vertex ``vertices[i]``.
    """
    vertices: tuple[int, ...]
    graph: Graph

    @classmethod
    def induced(cls, g: Graph, vertices: Sequence[int]) -> "Subgraph":
        vertices = tuple(int(v) for v in vertices)
        return cls(vertices, g.induced(vertices))

    @classmethod
    def partial(cls, g: Graph, vertices: Sequence[int], edges: Sequence[Sequence[int]]) -> "Subgraph":
        vertices = tuple(int(v) for v in vertices)
        index = {v: i for i, v in enumerate(vertices)}
        local = []
        for u, v in edges:
            if not g.has_edge(u, v):
                raise GraphError(f"({u}, {v}) is not an edge of the host graph")
            local.append((index[u], index[v]))
        return cls(vertices, Graph(len(vertices), local, [g.labels[v] for v in vertices]))

    def index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def distance(self, u: int, v: int) -> int:
        """Distance inside the subgraph between two host vertices."""
        idx = self.index()
        return self.graph.d(idx[u], idx[v])


@dataclass
class VertexMap:
    """Map from host vertices to host vertices lying in ``codomain``."""
    image: list[int]
    codomain: list[int]
    log: list[str] = field(default_factory=list)

    def __call__(self, v: int) -> int:
        return self.image[v]

    def to_json(self) -> str:
        return json.dumps({"image": self.image, "codomain": self.codomain})

    @classmethod
    def from_json(cls, text: str) -> "VertexMap":
        data = json.loads(text)
        return cls([int(x) for x in data["image"]], [int(x) for x in data["codomain"]])

    def compose(self, inner: "VertexMap") -> "VertexMap":
        """``self`` after ``inner``."""
        return VertexMap([self.image[v] for v in inner.image], list(self.codomain))


def _check_total(g: Graph, h: Subgraph, phi: VertexMap) -> dict[int, int]:
    if len(phi.image) != g.n:
        raise GraphError(f"map covers {len(phi.image)} vertices, graph has {g.n}")
    idx = h.index()
    for v, w in enumerate(phi.image):
        if w not in idx:
            raise GraphError(f"vertex {v} maps to {w}, which is outside the codomain")
    return idx


def is_weak_homomorphism(g: Graph, h: Subgraph, phi: VertexMap) -> bool:
    idx = _check_total(g, h, phi)
    dist = h.graph.dist
    img = [idx[w] for w in phi.image]
    return all(dist[img[u], img[v]] <= 1 for u, v in g.edges)


def is_weak_retraction(g: Graph, h: Subgraph, phi: VertexMap) -> bool:
    if not is_weak_homomorphism(g, h, phi):
        return False
    return all(phi.image[v] == v for v in h.vertices)


def identity_map(g: Graph) -> VertexMap:
    return VertexMap(list(g.vertices), list(g.vertices))


def nearest_vertex_map(g: Graph, vertices: Sequence[int]) -> VertexMap:
    """Send each vertex to its nearest target vertex (earliest in ``vertices`` on ties)."""
    vertices = list(vertices)
    rows = g.dist[:, vertices]
    return VertexMap([vertices[int(k)] for k in rows.argmin(axis=1)], vertices)


def closest_vertex_projection(t: Graph, triod_vertices: Sequence[int]) -> VertexMap:
    """Each tree vertex goes to its unique nearest vertex of the given subtree."""
    vertices = sorted(set(int(v) for v in triod_vertices))
    phi = nearest_vertex_map(t, vertices)
    rows = t.dist[:, vertices]
    best = rows.min(axis=1)
    ties = (rows == best[:, None]).sum(axis=1)
    if (ties > 1).any():
        v = int((ties > 1).argmax())
        raise RuntimeError(f"vertex {v} has several nearest subtree vertices; "
                           "the target is not a connected subtree")
    return phi


# -- lower bounds from retracts ------------------------------------------------

@dataclass(frozen=True)
class RetractCertificate:
    prediction: Prediction
    map: VertexMap
    shape: str
    size: int

    def to_dict(self) -> dict:
        return {"map": {"image": self.map.image, "codomain": self.map.codomain},
                "verified": True, "bound": self.prediction.to_dict(),
                "lemma": f"robber-{self.shape}"}


def retract_lower_bound(g: Graph, shape: str, vertices: Sequence[int], size: int,
                        phi: VertexMap | None = None) -> RetractCertificate | None:
    """Lower bound on the range from a triod or clique-triod weak retract.

    ``vertices`` span the candidate, ``size`` is its triod size and ``phi``
    an optional retraction (the nearest-vertex map is tried otherwise).
    None means no verified certificate, which is not the same as a bound of 0.
    """
    if shape not in (TRIOD, CLIQUE_TRIOD):
        raise DomainError(f"unknown retract shape {shape!r}")
    h = Subgraph.induced(g, vertices)
    if phi is None:
        phi = nearest_vertex_map(g, h.vertices)
    if not is_weak_retraction(g, h, phi):
        return None
    bound = lemma_lower_bound(shape, size)
    pred = Prediction(LOWER, Fraction(bound), f"thm:retract-{shape.replace('_', '-')}")
    return RetractCertificate(pred, phi, shape, size)


# -- grid projections ----------------------------------------------------------

UP, DOWN, RIGHT = "up", "down", "right"


@dataclass(frozen=True)
class GridTree:
    """The tree embedded in an odd-height grid, in 0-based ``(row, col)`` terms.

    ``branches`` maps each of ``up``, ``down`` and ``right`` to its path from
    the origin outwards (origin included).
    """
    n: int
    m: int
    rho: int
    x: int
    grid: Graph
    origin: int
    branches: dict[str, tuple[int, ...]]
    houses: dict[str, int]
    switching: int
    tree: Subgraph

    def vertex(self, i: int, j: int) -> int:
        return i * self.m + j


def _grid_parameters(n: int, m: int, rho: int) -> int:
    if n % 2 == 0:
        raise DomainError("the grid projections need an odd number of rows")
    if n > m:
        raise DomainError("the grid projections need n <= m")
    if 2 * rho + 3 > n:
        raise DomainError(f"need 2*rho + 3 <= n (rho={rho}, n={n})")
    if 8 * rho > 2 * m + n - 11:
        raise DomainError(f"need rho <= (2m + n - 11)/8 (rho={rho}, n={n}, m={m})")
    twice = 4 * rho + 5 - n
    if twice % 2 or twice < 0:
        raise DomainError(f"column offset (4*rho + 5 - n)/2 = {twice}/2 must be a "
                          "non-negative integer")
    return twice // 2


def _project_common(i: int, j: int, c: int, x: int, literal: bool) -> list[tuple[int, int]]:
    """Images of 1-based ``(i, j)``, ``j >= x + 1``, from every case whose condition holds.

    ``literal`` uses the row conditions exactly as printed for the second and
    fourth cases; otherwise they are mirrored so each case covers the half of
    the grid its image formula belongs to.
    """
    out = []
    if i + j >= c + x + 1 and i <= c:
        out.append((c, j - c + i))
    if i + j <= c + x + 1 and (i > c if literal else i <= c):
        out.append((i + j - x - 1, x + 1))
    if j - i >= x + 1 - c and i >= c:
        out.append((c, j + c - i))
    if j - i <= x + 1 - c and (i < c if literal else i >= c):
        out.append((i - j + x + 1, x + 1))
    return out


def _project_side(i: int, j: int, n: int, x: int, up: bool) -> list[tuple[int, int]]:
    out = []
    if up:
        if i + j <= x + 2:
            out.append((1, i + j - 1))
        if i + j >= x + 2:
            out.append((i + j - x - 1, x + 1))
    else:
        if i - j >= n - x - 1:
            out.append((n, n - i + j))
        if i - j <= n - x - 1:
            out.append((i + x + 1 - j, x + 1))
    return out


def projection_cases(n: int, m: int, rho: int, up: bool, literal: bool = False):
    """Per vertex, the list of 1-based images given by every applicable case."""
    x = _grid_parameters(n, m, rho)
    c = (n + 1) // 2
    table = {}
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if j >= x + 1:
                table[(i, j)] = _project_common(i, j, c, x, literal)
            else:
                table[(i, j)] = _project_side(i, j, n, x, up)
    return table


def grid_tree(n: int, m: int, rho: int) -> GridTree:
    x = _grid_parameters(n, m, rho)
    from .families import make_grid

    g = make_grid(n, m)
    cr = (n - 1) // 2

    def v(i, j):
        return i * m + j

    up = [v(i, x) for i in range(cr, -1, -1)] + [v(0, j) for j in range(x - 1, -1, -1)]
    down = [v(i, x) for i in range(cr, n)] + [v(n - 1, j) for j in range(x - 1, -1, -1)]
    right = [v(cr, j) for j in range(x, m)]
    assert len(up) - 1 == 2 * rho + 2 and len(down) - 1 == 2 * rho + 2
    vertices = []
    for path in (up, down, right):
        for u in path:
            if u not in vertices:
                vertices.append(u)
    tree = Subgraph.induced(g, vertices)
    balls = g.balls(rho)
    houses = {UP: balls[up[-1]], DOWN: balls[down[-1]], RIGHT: 0}
    switching = 0
    for j in range(x + 1):
        switching |= 1 << v(cr, j)
    gt = GridTree(n, m, rho, x, g, v(cr, x),
                  {UP: tuple(up), DOWN: tuple(down), RIGHT: tuple(right)},
                  houses, switching, tree)
    phis = grid_projections(n, m, rho)
    deep = set(right[rho + 2:])
    mask = 0
    for u in g.vertices:
        if phis[0](u) in deep or phis[1](u) in deep:
            mask |= 1 << u
    houses[RIGHT] = mask
    return gt


def grid_projections(n: int, m: int, rho: int) -> tuple[VertexMap, VertexMap]:
    """The up and down projections of the grid onto its embedded tree.

    Vertices whose image falls outside the tree are clamped to the nearest
    tree vertex in the same row and the clamp is logged on the map.
    """
    x = _grid_parameters(n, m, rho)
    from .families import make_grid

    g = make_grid(n, m)
    cr = (n - 1) // 2
    on_tree = set()
    for i in range(n):
        on_tree.add(i * m + x)
    on_tree.update(j for j in range(x))
    on_tree.update((n - 1) * m + j for j in range(x))
    on_tree.update(cr * m + j for j in range(x, m))
    codomain = sorted(on_tree)
    maps = []
    for up in (True, False):
        table = projection_cases(n, m, rho, up)
        image = []
        log = []
        for u in g.vertices:
            i, j = divmod(u, m)
            images = table[(i + 1, j + 1)]
            if not images:
                raise RuntimeError(f"no projection case applies to ({i + 1}, {j + 1})")
            if len(set(images)) > 1:
                raise RuntimeError(f"projection cases disagree at ({i + 1}, {j + 1}): {images}")
            a, b = images[0]
            w = (a - 1) * m + (b - 1)
            if not (1 <= a <= n and 1 <= b <= m) or w not in on_tree:
                row = min(max(a, 1), n) - 1
                w = min((t for t in codomain if t // m == row),
                        key=lambda t: (abs(t % m - (b - 1)), t))
                log.append(f"clamped ({i + 1}, {j + 1}) -> ({a}, {b}) to {divmod(w, m)}")
            image.append(w)
        maps.append(VertexMap(image, codomain, log))
    return maps[0], maps[1]
