"""Cop patrols built from the constructive upper-bound arguments."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from .. import vertexset as vs
from ..families import make_clique_triod, make_cycle_triod, make_grid
from ..formulas import (max_ell3_tree, predict_clique_triod, predict_cycle_triod, predict_tree)
from ..graph import (DomainError, Graph, is_caterpillar, is_tree, longest_path_in_tree,
                     shortest_path, validate_walk)

TREE_DFS = "tree_dfs"
CATERPILLAR = "caterpillar_backbone"
INTERVAL = "interval_sweep"
GRID_FIBER = "grid_fiber"
CYCLE_TRIOD = "cycle_triod_sweep"
CLIQUE_TRIOD = "clique_triod_sweep"


@dataclass
class PatrolPlan:
    walk: list[int]
    rho: int
    construction: str
    annotations: list[str] = field(default_factory=list)
    graph: Graph | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.annotations:
            self.annotations = [""] * len(self.walk)
        if len(self.annotations) != len(self.walk):
            raise ValueError("one annotation per walk step is required")

    def to_dict(self) -> dict:
        return {"rho": self.rho, "walk": list(self.walk), "annotations": list(self.annotations),
                "construction": self.construction}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "PatrolPlan":
        walk = [int(v) for v in data["walk"]]
        return cls(walk, int(data["rho"]), data.get("construction", "external"),
                   list(data.get("annotations") or [""] * len(walk)))


class _WalkBuilder:
    def __init__(self, start: int, note: str = "start"):
        self.walk = [start]
        self.notes = [note]

    @property
    def here(self) -> int:
        return self.walk[-1]

    def extend(self, steps: Sequence[int], note: str) -> None:
        for v in steps:
            self.walk.append(v)
            self.notes.append(note)

    def go(self, g: Graph, target: int, note: str, allowed: int | None = None) -> None:
        self.extend(shortest_path(g, self.here, target, allowed)[1:], note)


def check_around(g: Graph, origin: int, target: int, rho: int) -> list[int]:
    """Excursion from ``origin`` that brings ``target`` within range and returns.

    The returned steps exclude the starting ``origin`` and end back on it.
    The origin is out of range for at most one cop turn.
    """
    d = g.d(origin, target)
    if d <= rho:
        return []
    if d > 2 * rho + 1:
        raise DomainError(f"target {target} is {d} away; at most {2 * rho + 1} can be checked")
    path = shortest_path(g, origin, target)
    out = path[1:rho + 1]
    if d == 2 * rho + 1:
        out += [path[rho + 1], path[rho]]
    if rho:
        out += path[rho - 1::-1]
    return out


# -- trees ---------------------------------------------------------------------

def _deepest_beyond(t: Graph, a: int, away: int) -> list[int]:
    """Longest path from ``a`` among vertices whose route to ``a`` avoids ``away``.

    ``away`` is a neighbour of ``a``; pass ``a`` itself to allow everything.
    """
    da, dx = t.dist[a], t.dist[away]
    region = [w for w in t.vertices if away == a or dx[w] == da[w] + 1]
    far = max(region, key=lambda w: (da[w], -w))
    return shortest_path(t, a, far)


def _deepest_through(t: Graph, a: int, u: int) -> list[int]:
    """Longest path from ``a`` that starts with the edge to neighbour ``u``."""
    da, du = t.dist[a], t.dist[u]
    far = max((w for w in t.vertices if du[w] < da[w]), key=lambda w: (da[w], -w))
    return shortest_path(t, a, far)


def spine_path(t: Graph) -> list[int]:
    """A longest path through every origin of a maximum-size triod."""
    top, origins = max_ell3_tree(t)
    if top == 0:
        return longest_path_in_tree(t)
    a, b = max(((u, v) for u in origins for v in origins), key=lambda p: (t.d(*p), -p[0], -p[1]))
    core = shortest_path(t, a, b)
    if not set(origins) <= set(core):
        raise DomainError("maximum triod origins do not lie on a common path")
    if a == b:
        # two deepest branches at the single origin
        branches = sorted((_deepest_through(t, a, u) for u in t.nbrs[a]),
                          key=lambda p: (-len(p), p[1]))
        return branches[0][::-1] + branches[1][1:]
    head = _deepest_beyond(t, a, core[1])
    tail = _deepest_beyond(t, b, core[-2])
    return head[::-1] + core[1:-1] + tail


def tree_dfs_patrol(t: Graph) -> PatrolPlan:
    """Walk a triod-maximal longest path, checking every side vertex along the way."""
    if not is_tree(t):
        raise DomainError("tree_dfs_patrol needs a tree")
    rho = int(predict_tree(t).value)
    path = spine_path(t)
    on_path = vs.from_iter(path)
    balls = t.balls(rho)
    wb = _WalkBuilder(path[0], f"start at spine end {path[0]}")
    for i, v in enumerate(path):
        if i:
            wb.extend([v], f"advance along spine to {v}")
        covered = balls[v]
        side = [u for u in t.vertices if not vs.contains(on_path, u)
                and t.dist[v, u] <= 2 * rho + 1 and _hangs_off(t, u, v, path)]
        side.sort(key=lambda u: (-t.d(v, u), u))
        for u in side:
            if vs.contains(covered, u):
                continue
            frag = check_around(t, v, u, rho)
            for w in frag:
                covered |= balls[w]
            wb.extend(frag, f"check-around excursion for {u}")
    return PatrolPlan(wb.walk, rho, TREE_DFS, wb.notes, t)


def _hangs_off(t: Graph, u: int, v: int, path: list[int]) -> bool:
    """Whether the nearest spine vertex of ``u`` is ``v``."""
    return min(path, key=lambda p: (t.d(u, p), p)) == v


def caterpillar_patrol(g: Graph) -> PatrolPlan:
    if not is_caterpillar(g):
        raise DomainError("caterpillar_patrol needs a caterpillar")
    spine = longest_path_in_tree(g) if g.n > 1 else [0]
    if spine[0] > spine[-1]:
        spine.reverse()
    on_spine = vs.from_iter(spine)
    wb = _WalkBuilder(spine[0], "start of backbone")
    for i, v in enumerate(spine):
        if i:
            wb.extend([v], "backbone")
        for leaf in g.nbrs[v]:
            if not vs.contains(on_spine, leaf):
                wb.extend([leaf, v], f"leg detour to {leaf}")
    return PatrolPlan(wb.walk, 0, CATERPILLAR, wb.notes, g)


def interval_sweep_patrol(g: Graph, order: Sequence[int]) -> PatrolPlan:
    """Visit vertices by left endpoint, moving inside the already-seen prefix."""
    order = [int(v) for v in order]
    if sorted(order) != list(g.vertices):
        raise DomainError("interval order must list every vertex exactly once")
    if is_caterpillar(g):
        plan = caterpillar_patrol(g)
        return PatrolPlan(plan.walk, 0, INTERVAL, plan.annotations, g)
    seen = 1 << order[0]
    wb = _WalkBuilder(order[0], f"start at first interval {order[0]}")
    for v in order[1:]:
        if not g.adj[v] & seen:
            raise DomainError(f"vertex {v} meets no earlier interval; order does not fit the graph")
        seen |= 1 << v
        wb.go(g, v, f"sweep to {v}", seen)
    return PatrolPlan(wb.walk, 1, INTERVAL, wb.notes, g)


def grid_fiber_patrol(n: int, m: int) -> PatrolPlan:
    """Sweep the middle row left to right; the radius covers each column from there."""
    if n > m:
        raise DomainError("grid_fiber_patrol expects n <= m")
    g = make_grid(n, m)
    row = math.ceil(n / 2) - 1
    rho = max(row, n - 1 - row)
    walk = [row * m + j for j in range(m)]
    notes = [f"row {row}, column {j}" for j in range(m)]
    notes[0] += f"; radius {rho} against the n/2 = {n / 2} bound"
    return PatrolPlan(walk, rho, GRID_FIBER, notes, g)


def _triod_sweep(g: Graph, branches: list[list[int]], l: int, rho: int,
                 construction: str) -> PatrolPlan:
    """Sweep leg 1, cross to leg 2 and sweep it, then cross to leg 3 and sweep it.

    Each sweep stops at the house vertex closest to the origin part, which
    already brings the leg tip within range.
    """
    depth = max(l - rho, 0)
    p1, p2, p3 = branches
    wb = _WalkBuilder(p1[depth], "house 1, vertex nearest the origin")
    wb.go(g, p1[0], "back along leg 1")
    wb.go(g, p2[0], "cross to leg 2")
    wb.go(g, p2[depth], "sweep leg 2")
    wb.go(g, p2[0], "back along leg 2")
    wb.go(g, p3[0], "cross to leg 3")
    wb.go(g, p3[depth], "sweep leg 3")
    return PatrolPlan(wb.walk, rho, construction, wb.notes, g)


def cycle_triod_patrol(k: int, l: int) -> PatrolPlan:
    g = make_cycle_triod(k, l)
    rho = int(predict_cycle_triod(k, l).value)
    return _triod_sweep(g, g.meta["branches"], l, rho, CYCLE_TRIOD)


def clique_triod_patrol(q: int, l: int) -> PatrolPlan:
    g = make_clique_triod(q, l, l, l)
    rho = int(predict_clique_triod(l).value)
    return _triod_sweep(g, g.meta["branches"], l, rho, CLIQUE_TRIOD)


def check_plan(plan: PatrolPlan, g: Graph | None = None) -> bool:
    """Whether the plan's walk is valid and captures the best-response robber."""
    from ..solver import best_response

    g = g if g is not None else plan.graph
    if g is None:
        raise ValueError("no graph attached to the plan")
    return validate_walk(g, plan.walk) and best_response(g, plan.walk, plan.rho).captured
