"""Straightforward reimplementation of the survivor-set search.

Uses frozensets, explicit distance comparisons and no pruning or
vectorisation. It exists only to cross-check :mod:`patrolrange.solver`.
"""
from __future__ import annotations

from collections import deque

from .graph import Graph


def naive_cop_wins(g: Graph, rho: int) -> bool:
    V = range(g.n)

    def outside_ball(c):
        return {u for u in V if g.dist[c][u] > rho}

    def step(survivors):
        out = set(survivors)
        for u in survivors:
            for w in V:
                if g.dist[u][w] == 1:
                    out.add(w)
        return out

    todo = deque()
    seen = set()
    for c0 in V:
        start = frozenset(outside_ball(c0))
        if not start:
            return True
        todo.append((c0, start))
        seen.add((c0, start))
    while todo:
        c, survivors = todo.popleft()
        for c2 in V:
            if g.dist[c][c2] > 1:
                continue
            safe = outside_ball(c2)
            alive = survivors & safe
            if not alive:
                return True
            nxt = (c2, frozenset(step(alive) & safe))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return False


def naive_range(g: Graph) -> int:
    rho = 0
    while not naive_cop_wins(g, rho):
        rho += 1
    return rho
