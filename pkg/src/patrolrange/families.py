"""Generators for the graph families used throughout the experiments.

Every generator is deterministic; the random ones take an explicit seed and
use their own ``random.Random`` instance.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Any, Iterator, Sequence

from .graph import DomainError, Graph, GraphError

FAMILY_KINDS = ("path", "cycle", "triod", "clique_triod", "cycle_triod", "grid",
                "caterpillar", "interval", "random_tree", "figure1", "figure2")


def make_path(n: int) -> Graph:
    if n < 1:
        raise DomainError("path needs n >= 1")
    return Graph(n, [(i, i + 1) for i in range(n - 1)], meta={"name": f"P{n}", "kind": "path"})


def make_cycle(n: int) -> Graph:
    if n < 3:
        raise DomainError("cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], meta={"name": f"C{n}", "kind": "cycle"})


def make_complete(n: int) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return Graph(n, edges, meta={"name": f"K{n}", "kind": "complete"})


def make_star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)],
                 meta={"name": f"K1,{leaves}", "kind": "star"})


def _attach_legs(edges: list, start: int, anchors: Sequence[int], lengths: Sequence[int]):
    """Hang a path of each length off the matching anchor; returns legs and next free id."""
    legs = []
    nxt = start
    for anchor, length in zip(anchors, lengths):
        leg = [anchor]
        for _ in range(length):
            edges.append((leg[-1], nxt))
            leg.append(nxt)
            nxt += 1
        legs.append(leg)
    return legs, nxt


def make_triod(a: int, b: int, c: int) -> Graph:
    """Spider with legs ``a, b, c``; origin 0, then each leg outward in turn."""
    if min(a, b, c) < 1:
        raise DomainError("triod legs must have length >= 1")
    edges: list = []
    legs, n = _attach_legs(edges, 1, [0, 0, 0], [a, b, c])
    return Graph(n, edges, meta={"name": f"triod({a},{b},{c})", "kind": "triod",
                                 "origin": 0, "branches": legs})


def make_spider(lengths: Sequence[int]) -> Graph:
    """Spider with any number of legs (origin 0)."""
    edges: list = []
    legs, n = _attach_legs(edges, 1, [0] * len(lengths), lengths)
    return Graph(n, edges, meta={"name": f"spider{tuple(lengths)}", "kind": "spider",
                                 "origin": 0, "branches": legs})


def make_clique_triod(q: int, a: int, b: int, c: int) -> Graph:
    """Clique ``0..q-1`` with paths of lengths ``a, b, c`` hung off vertices 0, 1, 2."""
    if q < 3:
        raise DomainError("clique-origin needs at least 3 vertices")
    if min(a, b, c) < 1:
        raise DomainError("clique-triod paths must have length >= 1")
    edges = [(i, j) for i in range(q) for j in range(i + 1, q)]
    legs, n = _attach_legs(edges, q, [0, 1, 2], [a, b, c])
    return Graph(n, edges, meta={"name": f"clique_triod({q},{a},{b},{c})",
                                 "kind": "clique_triod", "clique": list(range(q)),
                                 "origins": [0, 1, 2], "branches": legs})


def make_cycle_triod(k: int, l: int) -> Graph:
    """``T_{k,l}``: a ``3k``-cycle with three length-``l`` paths at mutual distance ``k``.

    Cycle vertices are ``0..3k-1``; the attachment vertices are ``0, k, 2k``.
    ``meta["branches"][i]`` lists path ``i`` from its cycle vertex to its tip.
    """
    if k < 1 or l < 1:
        raise DomainError("cycle_triod needs k >= 1 and l >= 1")
    size = 3 * k
    edges = [(i, (i + 1) % size) for i in range(size)] if size > 3 else [(0, 1), (1, 2), (0, 2)]
    anchors = [0, k, 2 * k]
    legs, n = _attach_legs(edges, size, anchors, [l, l, l])
    return Graph(n, edges, meta={"name": f"T{k},{l}", "kind": "cycle_triod", "k": k, "l": l,
                                 "cycle": list(range(size)), "attach": anchors,
                                 "branches": legs, "tips": [leg[-1] for leg in legs]})


def make_grid(n: int, m: int) -> Graph:
    """``P_n x P_m`` with vertex ``(i, j)`` (0-based) at index ``i*m + j``."""
    if n < 1 or m < 1:
        raise DomainError("grid needs n, m >= 1")
    edges = []
    for i in range(n):
        for j in range(m):
            v = i * m + j
            if j + 1 < m:
                edges.append((v, v + 1))
            if i + 1 < n:
                edges.append((v, v + m))
    coords = [(i, j) for i in range(n) for j in range(m)]
    return Graph(n * m, edges, [f"{i},{j}" for i, j in coords],
                 meta={"name": f"grid{n}x{m}", "kind": "grid", "rows": n, "cols": m,
                       "coords": coords})


def make_caterpillar(spine: int, legs: Sequence[int]) -> Graph:
    """Path ``0..spine-1`` with ``legs[i]`` pendant vertices on spine vertex ``i``."""
    if spine < 1 or len(legs) != spine:
        raise DomainError("caterpillar needs one leg count per spine vertex")
    edges = [(i, i + 1) for i in range(spine - 1)]
    nxt = spine
    for i, count in enumerate(legs):
        for _ in range(count):
            edges.append((i, nxt))
            nxt += 1
    return Graph(nxt, edges, meta={"name": f"caterpillar{spine}", "kind": "caterpillar"})


# -- interval graphs -----------------------------------------------------------

def _separate_endpoints(intervals: Sequence[tuple[Fraction, Fraction]]):
    """Pull coinciding endpoints apart without changing which intervals meet.

    Within a group of equal endpoints, left endpoints go first (so touching
    closed intervals still overlap), then by interval index. Returns the
    adjusted intervals and a report of every endpoint that moved.
    """
    points = sorted({p for iv in intervals for p in iv})
    gaps = [b - a for a, b in zip(points, points[1:])]
    eps = (min(gaps) if gaps else Fraction(1)) / (2 * len(intervals) + 2)
    events = sorted((p, side, idx) for idx, iv in enumerate(intervals) for side, p in enumerate(iv))
    out = [list(iv) for iv in intervals]
    moved = []
    rank = 0
    for pos, (p, side, idx) in enumerate(events):
        rank = rank + 1 if pos and events[pos - 1][0] == p else 0
        if rank:
            q = p + eps * rank
            out[idx][side] = q
            moved.append({"interval": idx, "side": "be"[side], "from": str(p), "to": str(q)})
    return [(b, e) for b, e in out], moved


def make_interval_graph(intervals: Sequence[Sequence[Any]]) -> Graph:
    """Intersection graph of closed intervals.

    Endpoints are taken as exact rationals. Coinciding endpoints are pulled
    apart deterministically (the intersection pattern is preserved) and the
    shifts are reported in ``meta["perturbed"]``. ``meta["order"]``
    lists the vertices by increasing left endpoint.
    """
    if not intervals:
        raise DomainError("interval list is empty")
    ivs = []
    for i, iv in enumerate(intervals):
        b, e = Fraction(str(iv[0])), Fraction(str(iv[1]))
        if not b < e:
            raise DomainError(f"interval {i} has b >= e")
        ivs.append((b, e))
    n = len(ivs)
    separated, moved = _separate_endpoints(ivs)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if max(separated[i][0], separated[j][0]) <= min(separated[i][1], separated[j][1])]
    try:
        g = Graph(n, edges)
    except GraphError as exc:
        raise DomainError(f"interval graph is disconnected: {exc}") from None
    order = sorted(range(n), key=lambda v: (separated[v][0], v))
    g.meta.update({"name": f"interval{n}", "kind": "interval", "order": order,
                   "intervals": [(str(b), str(e)) for b, e in separated], "perturbed": moved})
    return g


def random_interval_graph(n: int, seed: int, max_tries: int = 10_000) -> Graph:
    """Connected interval graph on ``n`` intervals with integer endpoints.

    Endpoints are distinct integers drawn from a shuffled pool; lengths are
    biased short so that the sample mixes caterpillars with graphs containing
    triangles. Draws are repeated until the graph is connected.
    """
    rng = random.Random(seed)
    for _ in range(max_tries):
        pool = list(range(3 * n))
        rng.shuffle(pool)
        ivs = []
        for i in range(n):
            b = 2 * pool[i]
            e = b + 2 * rng.randint(1, 2 + n // 2) + 1
            ivs.append((b, e))
        try:
            g = make_interval_graph(ivs)
        except DomainError:
            continue
        g.meta.update({"name": f"interval{n}_s{seed}", "seed": seed})
        return g
    raise DomainError(f"no connected interval graph found for n={n}, seed={seed}")


# -- figure graphs -----------------------------------------------------------

def make_figure_graphs() -> tuple[Graph, Graph, Graph, Graph]:
    """The two edge-addition examples: (fig1, fig1 + e, fig2, fig2 + e).

    Figure 1 is the triod with legs 5, 6, 6 and ``e`` joins the first
    vertices of the two length-6 legs. Figure 2 is the triod with legs 4, 4, 4
    and ``e`` joins the second vertex of one leg to the first vertex of
    another.
    """
    fig1 = make_triod(5, 6, 6)
    up, down = fig1.meta["branches"][1], fig1.meta["branches"][2]
    fig1.meta["name"] = "figure1"
    fig1e = fig1.with_edges([(up[1], down[1])], name="figure1+e", extra_edge=(up[1], down[1]))
    fig2 = make_triod(4, 4, 4)
    up, down = fig2.meta["branches"][1], fig2.meta["branches"][2]
    fig2.meta["name"] = "figure2"
    fig2e = fig2.with_edges([(up[2], down[1])], name="figure2+e", extra_edge=(up[2], down[1]))
    return fig1, fig1e, fig2, fig2e


# -- trees ---------------------------------------------------------------------

def tree_from_pruefer(code: Sequence[int]) -> Graph:
    n = len(code) + 2
    degree = [1] * n
    for x in code:
        degree[x] += 1
    edges = []
    for x in code:
        leaf = min(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, w = [v for v in range(n) if degree[v] == 1]
    edges.append((u, w))
    return Graph(n, edges)


def random_tree(n: int, seed: int) -> Graph:
    """Uniform labelled tree on ``n`` vertices from a random Pruefer code."""
    if n < 1:
        raise DomainError("random_tree needs n >= 1")
    if n <= 2:
        g = make_path(n)
    else:
        rng = random.Random(seed)
        g = tree_from_pruefer([rng.randrange(n) for _ in range(n - 2)])
    g.meta.update({"name": f"tree{n}_s{seed}", "kind": "random_tree", "seed": seed})
    return g


def random_caterpillar(n: int, seed: int) -> Graph:
    """Caterpillar on ``n`` vertices: random spine length, legs spread at random."""
    if n < 1:
        raise DomainError("random_caterpillar needs n >= 1")
    rng = random.Random(seed)
    spine = rng.randint(max(1, (n + 2) // 3), n)
    legs = [0] * spine
    for _ in range(n - spine):
        legs[rng.randrange(spine)] += 1
    g = make_caterpillar(spine, legs)
    g.meta.update({"name": f"caterpillar{n}_s{seed}", "kind": "caterpillar", "seed": seed})
    return g


def tree_canonical_form(g: Graph) -> str:
    """AHU encoding rooted at the center(s); equal strings iff isomorphic trees."""
    n = g.n
    if n == 1:
        return "()"
    degree = [g.degree(v) for v in range(n)]
    layer = [v for v in range(n) if degree[v] == 1]
    remaining = n
    removed = [False] * n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            removed[v] = True
            for w in g.nbrs[v]:
                if not removed[w]:
                    degree[w] -= 1
                    if degree[w] == 1:
                        nxt.append(w)
        layer = nxt
    centres = [v for v in range(n) if not removed[v]]

    def encode(v: int, parent: int) -> str:
        return "(" + "".join(sorted(encode(w, v) for w in g.nbrs[v] if w != parent)) + ")"

    return min(encode(c, -1) for c in centres)


def enumerate_trees(n: int) -> Iterator[Graph]:
    """One tree per isomorphism class on ``n`` vertices, in a fixed order.

    Grows every class on ``n - 1`` vertices by one leaf in all positions and
    deduplicates with canonical forms.
    """
    if not 1 <= n <= 12:
        raise DomainError("enumerate_trees supports 1 <= n <= 12")
    classes = {"()": Graph(1, [])}
    for size in range(2, n + 1):
        grown: dict[str, Graph] = {}
        for key in sorted(classes):
            t = classes[key]
            for v in range(t.n):
                child = Graph(size, list(t.edges) + [(v, size - 1)])
                grown.setdefault(tree_canonical_form(child), child)
        classes = grown
    for i, key in enumerate(sorted(classes)):
        g = classes[key]
        g.meta.update({"name": f"tree{n}_{i}", "kind": "tree"})
        yield g


# -- family specs ----------------------------------------------------------------

def build_family(kind: str, params: dict[str, Any] | None = None) -> Graph:
    """Instantiate a family from ``{"kind": ..., "params": {...}}`` style input."""
    p = dict(params or {})
    try:
        if kind == "path":
            return make_path(int(p["n"]))
        if kind == "cycle":
            return make_cycle(int(p["n"]))
        if kind == "triod":
            return make_triod(int(p["a"]), int(p["b"]), int(p["c"]))
        if kind == "clique_triod":
            return make_clique_triod(int(p.get("q", 3)), int(p["a"]), int(p["b"]), int(p["c"]))
        if kind == "cycle_triod":
            return make_cycle_triod(int(p["k"]), int(p["l"]))
        if kind == "grid":
            return make_grid(int(p["n"]), int(p["m"]))
        if kind == "caterpillar":
            return random_caterpillar(int(p["n"]), int(p.get("seed", 0)))
        if kind == "interval":
            if "intervals" in p:
                return make_interval_graph(p["intervals"])
            return random_interval_graph(int(p["n"]), int(p.get("seed", 0)))
        if kind == "random_tree":
            return random_tree(int(p["n"]), int(p.get("seed", 0)))
        if kind in ("figure1", "figure2"):
            fig1, fig1e, fig2, fig2e = make_figure_graphs()
            with_e = bool(p.get("e", False))
            if kind == "figure1":
                return fig1e if with_e else fig1
            return fig2e if with_e else fig2
    except KeyError as exc:
        raise DomainError(f"family {kind!r} is missing parameter {exc.args[0]!r}") from None
    raise DomainError(f"unknown family kind {kind!r}; expected one of {', '.join(FAMILY_KINDS)}")
