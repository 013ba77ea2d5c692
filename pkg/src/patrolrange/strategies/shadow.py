"""Shadowing robber for triods and clique-triods.

The robber keeps as close to the cop as he safely can: before a cop move
towards him he stands at distance ``rho + 2``, before a move away at
``rho + 1``, and otherwise stays put. When several vertices qualify he
prefers a branch that is neither the cop's own branch nor the branch of the
next house the cop enters, then the vertex furthest from the cop's position
two moves ahead, then the lowest index. Vertices beyond the cop on his own
branch rank last, since the only way out of them leads through him.

The engine works on an arbitrary arena graph and a sequence of cop
positions on it, so the grid robber reuses it with projected positions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..formulas import CLIQUE_TRIOD, TRIOD, robber_threshold
from ..graph import DomainError, Graph, is_tree, validate_walk

TRIOD_SHADOW = "triod_shadow"
CLIQUE_TRIOD_SHADOW = "clique_triod_shadow"
GRID_PROJECTION = "grid_projection"


@dataclass
class RobberAutomaton:
    """Arena data for a shadowing robber.

    ``branches[b]`` runs from the branch's attachment vertex to its leaf;
    ``branch_of[v]`` is the branch index of ``v`` or None on the origin part;
    ``houses[b]`` is the mask of house vertices of branch ``b``.
    """
    kind: str
    rho: int
    origins: list[int]
    branches: list[list[int]]
    branch_of: list[int | None]
    houses: list[int]
    extra: dict = field(default_factory=dict)

    def house_at(self, v: int) -> int | None:
        for b, mask in enumerate(self.houses):
            if mask >> v & 1:
                return b
        return None


@dataclass
class EvasionRun:
    ok: bool
    walk: list[int]
    reason: str = ""
    min_distance: int | None = None

    def to_dict(self) -> dict:
        return {"evaded": self.ok, "walk": self.walk, "reason": self.reason,
                "min_distance": self.min_distance}


def _branch_labels(n: int, branches: Sequence[Sequence[int]], skip_first: bool) -> list[int | None]:
    out: list[int | None] = [None] * n
    for b, leg in enumerate(branches):
        for v in (leg[1:] if skip_first else leg):
            out[v] = b
    return out


def _house_masks(branches: Sequence[Sequence[int]], rho: int) -> list[int]:
    masks = []
    for leg in branches:
        mask = 0
        for v in leg[-(rho + 1):]:
            mask |= 1 << v
        masks.append(mask)
    return masks


def _triod_legs(g: Graph) -> tuple[int, list[list[int]]]:
    if "branches" in g.meta and g.meta.get("origin") is not None:
        return g.meta["origin"], [list(leg) for leg in g.meta["branches"]]
    hubs = [v for v in g.vertices if g.degree(v) == 3]
    if not is_tree(g) or len(hubs) != 1 or any(g.degree(v) > 3 for v in g.vertices):
        raise DomainError("graph is not a triod")
    o = hubs[0]
    legs = []
    for u in g.nbrs[o]:
        leg = [o, u]
        while g.degree(leg[-1]) == 2:
            leg.append(next(w for w in g.nbrs[leg[-1]] if w != leg[-2]))
        legs.append(leg)
    return o, legs


def triod_automaton(g: Graph, rho: int, strict: bool = True) -> RobberAutomaton:
    """``strict=False`` skips the size precondition, for watching the rules fail."""
    o, legs = _triod_legs(g)
    size = min(len(leg) - 1 for leg in legs)
    if strict and size < robber_threshold(TRIOD, rho):
        raise DomainError(f"triod size {size} is below {robber_threshold(TRIOD, rho)} "
                          f"needed against radius {rho}")
    return RobberAutomaton(TRIOD_SHADOW, rho, [o], legs, _branch_labels(g.n, legs, True),
                           _house_masks(legs, rho))


def clique_triod_automaton(g: Graph, rho: int, strict: bool = True) -> RobberAutomaton:
    if g.meta.get("kind") != "clique_triod":
        raise DomainError("clique-triod automaton needs a graph built as a clique-triod")
    legs = [list(leg) for leg in g.meta["branches"]]
    size = min(len(leg) - 1 for leg in legs)
    if strict and size < robber_threshold(CLIQUE_TRIOD, rho):
        raise DomainError(f"clique-triod size {size} is below "
                          f"{robber_threshold(CLIQUE_TRIOD, rho)} needed against radius {rho}")
    return RobberAutomaton(CLIQUE_TRIOD_SHADOW, rho, list(g.meta["origins"]), legs,
                           _branch_labels(g.n, legs, False), _house_masks(legs, rho),
                           {"clique": list(g.meta["clique"])})


def next_houses(cop_branch: Sequence[int | None], house_seq: Sequence[int | None]) -> list[int | None]:
    """For each time, the house of the first later visit that lies off the cop's branch."""
    out: list[int | None] = [None] * len(house_seq)
    soonest: dict[int, int] = {}
    for t in range(len(house_seq) - 1, -1, -1):
        later = [(s, h) for h, s in soonest.items() if h != cop_branch[t]]
        if later:
            out[t] = min(later)[1]
        if house_seq[t] is not None:
            soonest[house_seq[t]] = t
    return out


def shadow_walk(arena: Graph, aut: RobberAutomaton, cop: Sequence[int],
                house_seq: Sequence[int | None] | None = None,
                measure: Callable[[int, int], int] | None = None,
                viable: Sequence[int] | None = None) -> EvasionRun:
    """Run the shadowing robber against cop positions ``cop`` on ``arena``.

    ``house_seq[t]`` names the house the cop occupies at time ``t``; by
    default it is read off the arena houses. ``measure(s, t)`` overrides the
    distance a robber on ``s`` assumes to the cop at time ``t``.
    ``viable[t]`` is a mask of arena vertices the robber may occupy at time
    ``t``; when no rule-safe move is viable he takes any viable one.
    """
    rho = aut.rho
    dist = arena.dist
    steps = len(cop)
    if house_seq is None:
        house_seq = [aut.house_at(c) for c in cop]
    cop_branch = [aut.branch_of[c] for c in cop]
    upcoming = next_houses(cop_branch, house_seq)

    def gap(s: int, t: int) -> int:
        return int(dist[s, cop[t]]) if measure is None else measure(s, t)

    def safe(s: int, t: int) -> bool:
        return gap(s, t) > rho and (t + 1 >= steps or gap(s, t + 1) > rho)

    def target(s: int, t: int) -> int | None:
        if t + 1 >= steps:
            return None
        delta = gap(s, t + 1) - gap(s, t)
        if delta < 0:
            return rho + 2
        if delta > 0:
            return rho + 1
        return None

    def branch_rank(s: int, t: int) -> int:
        b = aut.branch_of[s]
        if b is None:
            return 1
        if b == cop_branch[t]:
            root = aut.branches[b][0]
            # the far side of the cop on his own branch is a dead end
            return 3 if dist[root, s] > dist[root, cop[t]] else 2
        return 2 if b == upcoming[t] else 0

    def key(s: int, t: int, goal: int | None):
        miss = abs(gap(s, t) - goal) if goal is not None else 0
        ahead = -gap(s, t + 2) if t + 2 < steps else 0
        return miss, branch_rank(s, t), ahead, s

    walk: list[int] = []
    for t in range(steps):
        allowed = (lambda s: True) if viable is None else (lambda s, m=viable[t]: m >> s & 1)
        if t == 0:
            cands = [s for s in arena.vertices if safe(s, 0) and allowed(s)]
            if not cands and viable is not None:
                cands = [s for s in arena.vertices if allowed(s)]
            if not cands:
                return EvasionRun(False, walk, "no safe starting vertex")
            pick = min(cands, key=lambda s: key(s, 0, target(s, 0) or rho + 1))
        else:
            r = walk[-1]
            cands = [s for s in (r, *arena.nbrs[r]) if safe(s, t) and allowed(s)]
            if not cands and viable is not None:
                cands = [s for s in (r, *arena.nbrs[r]) if allowed(s)]
            if not cands:
                return EvasionRun(False, walk, f"cornered at time {t} on vertex {r}")
            goal = target(r, t)
            if goal is None and r in cands:
                pick = r
            else:
                pick = min(cands, key=lambda s: key(s, t, goal if goal is not None else rho + 1))
        walk.append(pick)
    gaps = [gap(walk[t], t) for t in range(steps)]
    gaps += [gap(walk[t], t + 1) for t in range(steps - 1)]
    return EvasionRun(True, walk, "", min(gaps))


def triod_shadow_robber(g: Graph, automaton: RobberAutomaton | None, patrol: Sequence[int],
                        rho: int, strict: bool = True) -> EvasionRun:
    """Shadowing robber on a triod or clique-triod against a fixed patrol."""
    if not validate_walk(g, patrol):
        raise DomainError("patrol is not a valid walk")
    if automaton is None:
        build = clique_triod_automaton if g.meta.get("kind") == "clique_triod" else triod_automaton
        automaton = build(g, rho, strict)
    if automaton.rho != rho:
        raise DomainError("automaton was built for a different radius")
    return shadow_walk(g, automaton, list(patrol))
