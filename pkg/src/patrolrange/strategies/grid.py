"""Grid robber: shadow an imagined cop on the tree embedded in the grid.

The cop's grid position is projected onto the tree with one of two maps.
While the cop travels between the right house and the upper (lower) house
the upper (lower) map is used. Travelling from the upper house to the lower
one, the robber keeps the upper map until the cop steps into the switching
area on the middle row, then changes to the lower map, and symmetrically.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..graph import DomainError, validate_walk
from ..retracts import DOWN, RIGHT, UP, GridTree, grid_projections, grid_tree
from .shadow import GRID_PROJECTION, EvasionRun, RobberAutomaton, shadow_walk

ORDER = (UP, DOWN, RIGHT)


@dataclass
class GridRobber:
    tree: GridTree
    automaton: RobberAutomaton
    up: list[int]
    down: list[int]

    def house_of(self, v: int) -> str | None:
        for name in ORDER:
            if self.tree.houses[name] >> v & 1:
                return name
        return None


def grid_robber_automaton(n: int, m: int, rho: int) -> GridRobber:
    """Build the embedded tree, houses and projections (odd ``n``; even ``n`` uses ``n - 1`` rows)."""
    if n > m:
        raise DomainError("grid robber expects n <= m")
    rows = n if n % 2 else n - 1
    gt = grid_tree(rows, m, rho)
    index = gt.tree.index()
    branches = [[index[v] for v in gt.branches[name]] for name in ORDER]
    size = gt.tree.graph.n
    branch_of: list[int | None] = [None] * size
    for b, leg in enumerate(branches):
        for v in leg[1:]:
            branch_of[v] = b
    phi_up, phi_down = grid_projections(rows, m, rho)
    # tree-side houses only serve as a fallback; the real houses live in the grid
    aut = RobberAutomaton(GRID_PROJECTION, rho, [index[gt.origin]], branches, branch_of,
                          [0, 0, 0], {"rows": rows, "cols": m, "x": gt.x})
    return GridRobber(gt, aut, [index[w] for w in phi_up.image],
                      [index[w] for w in phi_down.image])


def projection_modes(robber: GridRobber, patrol: Sequence[int]) -> list[str]:
    """Which projection (``up`` or ``down``) the robber applies at each time."""
    seq = [robber.house_of(c) for c in patrol]
    steps = len(patrol)
    last: list[str | None] = []
    cur = None
    for h in seq:
        cur = h if h is not None else cur
        last.append(cur)
    nxt: list[str | None] = [None] * steps
    after: list[str | None] = [None] * steps
    soonest: dict[str, int] = {}
    for t in range(steps - 1, -1, -1):
        visits = [h for _, h in sorted((s, h) for h, s in soonest.items() if h != last[t])]
        if visits:
            nxt[t] = visits[0]
            after[t] = visits[1] if len(visits) > 1 else None
        if seq[t] is not None:
            soonest[seq[t]] = t
    switching = robber.tree.switching
    modes = []
    mode = UP
    crossed = False
    for t in range(steps):
        if t and last[t] != last[t - 1] or t and nxt[t] != nxt[t - 1]:
            crossed = False
        pair = {last[t], nxt[t]}
        if pair == {RIGHT, UP}:
            mode = UP
        elif pair == {RIGHT, DOWN}:
            mode = DOWN
        elif pair == {UP, DOWN}:
            if switching >> patrol[t] & 1 and robber.house_of(patrol[t]) is None:
                crossed = True
            mode = nxt[t] if crossed else last[t]
        elif last[t] is None and nxt[t] in (UP, DOWN):
            mode = nxt[t]
        elif last[t] is None and nxt[t] == RIGHT and after[t] in (UP, DOWN):
            mode = after[t]
        elif nxt[t] is None and last[t] in (UP, DOWN):
            mode = last[t]
        modes.append(mode)
    return modes


def viable_masks(robber: GridRobber, patrol: Sequence[int]) -> list[int]:
    """Per time, the tree vertices from which the robber can still outlast ``patrol``.

    A vertex is viable at time ``t`` when its grid distance to the cop now
    and after his next move exceeds the radius and one of its closed tree
    neighbours is viable at ``t + 1``.
    """
    gt = robber.tree
    dist = gt.grid.dist
    tv = gt.tree.vertices
    closed = gt.tree.graph.closed
    rho = gt.rho
    steps = len(patrol)
    masks = [0] * steps
    reach = -1
    for t in range(steps - 1, -1, -1):
        far = dist[list(tv), patrol[t]] > rho
        if t + 1 < steps:
            far &= dist[list(tv), patrol[t + 1]] > rho
        mask = 0
        for s, ok in enumerate(far):
            if ok and closed[s] & reach:
                mask |= 1 << s
        masks[t] = mask
        reach = mask
    return masks


def grid_projection_robber(n: int, m: int, rho: int, patrol: Sequence[int],
                           guard: bool = True) -> EvasionRun:
    """Robber walk in the ``n x m`` grid against ``patrol`` (grid vertex indices).

    The robber shadows the projected cop on the embedded tree. Neither map
    fixes the far arm's row segment (the upper map moves the bottom row of
    the lower arm and vice versa), so the projected distance there can
    overstate the real one and the bare rules occasionally walk into the
    cop. With ``guard`` the robber only takes moves after which he can still
    survive on the tree against the rest of the patrol, keeping the rule
    preferences among those; with it off the rules run unchecked.
    """
    robber = grid_robber_automaton(n, m, rho)
    gt = robber.tree
    full = n * m
    if any(not 0 <= c < full for c in patrol):
        raise DomainError("patrol leaves the grid")
    if n != gt.n:
        # even height: the cop is seen through the first n - 1 rows
        patrol = [min(c, (gt.n - 1) * m + c % m) for c in patrol]
    if not validate_walk(gt.grid, patrol):
        raise DomainError("patrol is not a valid walk")
    modes = projection_modes(robber, patrol)
    imagined = [(robber.up if mode == UP else robber.down)[c] for mode, c in zip(modes, patrol)]
    house_idx = [None if h is None else ORDER.index(h) for h in (robber.house_of(c) for c in patrol)]
    viable = viable_masks(robber, patrol) if guard else None
    if viable is not None and not viable[0]:
        return EvasionRun(False, [], "no tree vertex survives the whole patrol")
    run = shadow_walk(gt.tree.graph, robber.automaton, imagined, house_idx, viable=viable)
    tv = gt.tree.vertices
    walk = [tv[v] for v in run.walk]
    if not run.ok:
        return EvasionRun(False, walk, run.reason)
    dist = gt.grid.dist
    gaps = [int(dist[walk[t], patrol[t]]) for t in range(len(walk))]
    gaps += [int(dist[walk[t], patrol[t + 1]]) for t in range(len(walk) - 1)]
    low = min(gaps)
    if low <= rho:
        t = gaps.index(low)
        return EvasionRun(False, walk, f"grid distance {low} at step {t % len(walk)} "
                          "breaks the projected safety", low)
    return EvasionRun(True, walk, "", low)
