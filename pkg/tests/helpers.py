"""Shared generators for the test suite."""
from __future__ import annotations

import random

from contextlib import contextmanager

from hypothesis import strategies as st

from patrolrange.graph import Graph, shortest_path


# criterion number -> (passed, summary), printed at the end of the session
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@contextmanager
def criterion(number: int, text: str):
    ACCEPTANCE[number] = (False, text)
    yield
    ACCEPTANCE[number] = (True, text)


def random_walk(g: Graph, length: int, rng: random.Random, lazy: float = 0.2) -> list[int]:
    walk = [rng.randrange(g.n)]
    while len(walk) < length:
        if rng.random() < lazy or not g.nbrs[walk[-1]]:
            walk.append(walk[-1])
        else:
            walk.append(rng.choice(g.nbrs[walk[-1]]))
    return walk


def target_tour(g: Graph, length: int, rng: random.Random, targets: list[int]) -> list[int]:
    """Shortest-path hops between targets, with an occasional random vertex."""
    walk = [rng.randrange(g.n)]
    while len(walk) < length:
        goal = rng.choice(targets) if rng.random() < 0.8 else rng.randrange(g.n)
        walk += shortest_path(g, walk[-1], goal)[1:] or [walk[-1]]
    return walk[:length]


def seeded_patrol(g: Graph, seed: int, targets: list[int], max_len: int = 500) -> list[int]:
    """Odd seeds give lazy random walks, even seeds tours of ``targets``."""
    rng = random.Random(seed)
    length = rng.randint(1, max_len)
    if seed % 2:
        return random_walk(g, length, rng)
    return target_tour(g, length, rng, targets)


@st.composite
def connected_graphs(draw, min_n: int = 1, max_n: int = 9, extra: int = 6) -> Graph:
    """Random spanning tree plus a few extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = [(v, draw(st.integers(0, v - 1))) for v in range(1, n)]
    if n > 1:
        for _ in range(draw(st.integers(0, extra))):
            u, v = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
            if u != v:
                edges.append((u, v))
    return Graph(n, edges)


@st.composite
def trees(draw, min_n: int = 1, max_n: int = 12) -> Graph:
    n = draw(st.integers(min_n, max_n))
    return Graph(n, [(v, draw(st.integers(0, v - 1))) for v in range(1, n)])
