"""Closed-form range predictions and bounds, plus the triod-size machinery."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import vertexset as vs
from .graph import DomainError, Graph, is_caterpillar, is_tree

EXACT, LOWER, UPPER, MEMBERSHIP = "exact", "lower_bound", "upper_bound", "membership"


class SearchLimitExceeded(RuntimeError):
    """An exhaustive search ran past its node budget; the answer is undecided."""


@dataclass(frozen=True)
class Prediction:
    kind: str
    value: Fraction
    source: str
    note: str = ""

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "value": f"{self.value.numerator}/{self.value.denominator}",
               "source": self.source}
        if self.note:
            out["note"] = self.note
        return out

    def admits(self, rho: int) -> bool:
        """Whether an integer range ``rho`` is consistent with this prediction."""
        if self.kind == EXACT:
            return rho == self.value
        if self.kind == LOWER:
            return rho >= self.value
        if self.kind == UPPER:
            return rho <= self.value
        raise ValueError("membership predictions do not constrain a range value")


# -- robber thresholds --------------------------------------------------------
# Robber escapes a radius-rho cop on a triod when its size is at least
# 2*rho + 2, and on a clique-triod when its size is at least 2*rho + 1.

TRIOD = "triod"
CLIQUE_TRIOD = "clique_triod"


def robber_threshold(kind: str, rho: int) -> int:
    if kind == TRIOD:
        return 2 * rho + 2
    if kind == CLIQUE_TRIOD:
        return 2 * rho + 1
    raise ValueError(f"unknown special graph kind {kind!r}")


def lemma_lower_bound(kind: str, size: int) -> int:
    """Least range a graph can have if it retracts onto this triod/clique-triod.

    That is one more than the largest radius the robber is known to beat, or
    0 when he beats none.
    """
    rho = -1
    while size >= robber_threshold(kind, rho + 1):
        rho += 1
    return rho + 1


def conjecture_threshold(kind: str, rho: int) -> int:
    """Size a retract must reach to certify ``range >= rho`` (robber beats ``rho - 1``)."""
    return robber_threshold(kind, rho - 1)


# -- triod sizes ---------------------------------------------------------------

def branch_depths(t: Graph, v: int) -> list[int]:
    """Depth of each branch of tree ``t`` at ``v``, deepest first."""
    if not is_tree(t):
        raise DomainError("branch_depths needs a tree")
    dv = t.dist[v]
    depths = []
    for u in t.nbrs[v]:
        in_branch = t.dist[u] < dv
        depths.append(int(dv[in_branch].max()))
    return sorted(depths, reverse=True)


def ell3_tree(t: Graph, v: int) -> int:
    """Largest triod size with origin ``v`` in the tree ``t`` (0 if ``deg v < 3``)."""
    depths = branch_depths(t, v)
    return depths[2] if len(depths) >= 3 else 0


def _grow_legs(g: Graph, used: int, tips: list[int], length: int, budget: list[int]):
    """Extend three induced legs from ``tips`` to ``length`` each, one leg at a time.

    ``used`` holds every vertex placed so far. A new vertex may touch only the
    tip it extends. Returns the legs (lists from anchor outwards) or None.
    """
    legs = [[t] for t in tips]

    def extend(which: int, used: int) -> bool:
        if which == len(legs):
            return True
        leg = legs[which]
        if len(leg) - 1 == length:
            return extend(which + 1, used)
        budget[0] -= 1
        if budget[0] < 0:
            raise SearchLimitExceeded("induced triod search exceeded its node budget")
        tip = leg[-1]
        tip_bit = 1 << tip
        for w in vs.members(g.adj[tip] & ~used):
            if g.adj[w] & used != tip_bit:
                continue
            # keep first vertices of the legs in increasing order when they share an anchor
            if len(leg) == 1 and which and legs[which - 1][0] == tip and w < legs[which - 1][1]:
                continue
            leg.append(w)
            if extend(which, used | (1 << w)):
                return True
            leg.pop()
        return False

    return [list(l) for l in legs] if extend(0, used) else None


def find_induced_triod(g: Graph, v: int, length: int, budget: int = 2_000_000):
    """Legs of an induced triod with origin ``v`` and all legs of ``length``, or None."""
    if g.degree(v) < 3 or length < 1:
        return None
    return _grow_legs(g, 1 << v, [v, v, v], length, [budget])


def triangles(g: Graph):
    """Every triangle ``(a, b, c)`` with ``a < b < c``."""
    for a in range(g.n):
        for b in vs.members(g.adj[a] & ~((2 << a) - 1)):
            for c in vs.members(g.adj[a] & g.adj[b] & ~((2 << b) - 1)):
                yield a, b, c


def find_induced_clique_triod(g: Graph, length: int, budget: int = 2_000_000,
                              triangle: Sequence[int] | None = None):
    """``(triangle, legs)`` of an induced clique-triod with legs of ``length``, or None.

    Only triangles are tried as clique-origins: shrinking a larger
    clique-origin to the three attachment vertices keeps the subgraph induced.
    ``triangle`` restricts the search to one given origin.
    """
    left = [budget]
    for tri in ([list(triangle)] if triangle is not None else map(list, triangles(g))):
        for first in range(3):
            order = tri[first:] + tri[:first]
            legs = _grow_legs(g, vs.from_iter(tri), order, length, left)
            if legs is not None:
                return tri, legs
    return None


def ell3_general(g: Graph, v: int, limit: int | None = None, budget: int = 2_000_000) -> int:
    """Largest induced triod size with origin ``v``, legs capped at ``limit``.

    Exponential search; meant for small graphs. Legs of a larger induced
    triod can be trimmed, so sizes are tried upwards until one fails.
    """
    if g.degree(v) < 3:
        return 0
    cap = limit if limit is not None else g.n
    best = 0
    while best < cap and find_induced_triod(g, v, best + 1, budget) is not None:
        best += 1
    return best


def max_ell3_tree(t: Graph) -> tuple[int, list[int]]:
    """Maximum triod size over all vertices and the origins attaining it."""
    sizes = [ell3_tree(t, v) for v in t.vertices]
    top = max(sizes)
    return top, [v for v, s in enumerate(sizes) if s == top]


# -- predictions ---------------------------------------------------------------

def predict_tree(t: Graph) -> Prediction:
    if not is_tree(t):
        raise DomainError("predict_tree needs a tree")
    value = max(ell3_tree(t, v) // 2 for v in t.vertices)
    return Prediction(EXACT, Fraction(value), "thm:trees")


def predict_cycle(k: int) -> Prediction:
    if k < 3:
        raise DomainError("cycles need k >= 3")
    return Prediction(EXACT, Fraction(math.ceil(k / 2) - 1), "thm:cycles",
                      note="proved as a lower bound; exactness checked by the solver for small k")


def predict_cycle_triod(k: int, l: int) -> Prediction:
    if k < 1 or l < 1:
        raise DomainError("cycle_triod needs k, l >= 1")
    a = math.ceil(Fraction(l, 2) + Fraction(k - 2, 4))
    b = math.ceil(Fraction(3 * k - 2, 2))
    return Prediction(EXACT, Fraction(max(a, b)), "thm:cycle-triod")


def predict_clique_triod(l: int) -> Prediction:
    if l < 1:
        raise DomainError("clique-triod legs need length >= 1")
    return Prediction(EXACT, Fraction(math.ceil(Fraction(l, 2))), "thm:clique-triod")


def grid_bounds(n: int, m: int) -> tuple[Prediction, Prediction]:
    if n > m:
        n, m = m, n
    lower = min(Fraction(n - 3, 2), Fraction(2 * m + n - 10, 8))
    upper = Fraction(n, 2)
    return Prediction(LOWER, lower, "thm:grid"), Prediction(UPPER, upper, "thm:grid")


def predict_interval(g: Graph, is_interval: bool) -> Prediction:
    """Exact range of a connected interval graph; interval provenance is the caller's claim."""
    if not is_interval:
        raise DomainError("predict_interval needs a graph built from an interval model")
    return Prediction(EXACT, Fraction(0 if is_caterpillar(g) else 1), "thm:interval")


def predict_caterpillar(g: Graph) -> Prediction:
    """Membership prediction: range 0 exactly for caterpillars."""
    return Prediction(MEMBERSHIP, Fraction(int(is_caterpillar(g))), "thm:caterpillar")


def predict(g: Graph) -> list[Prediction]:
    """Every prediction that applies to ``g`` according to its family metadata."""
    kind = g.meta.get("kind")
    out = []
    if is_tree(g):
        out.append(predict_tree(g))
    if kind == "cycle":
        out.append(predict_cycle(g.n))
    elif kind == "cycle_triod":
        out.append(predict_cycle_triod(g.meta["k"], g.meta["l"]))
    elif kind == "clique_triod":
        lengths = {len(leg) - 1 for leg in g.meta["branches"]}
        if len(lengths) == 1:
            out.append(predict_clique_triod(lengths.pop()))
    elif kind == "grid":
        out.extend(grid_bounds(g.meta["rows"], g.meta["cols"]))
    elif kind == "interval":
        out.append(predict_interval(g, True))
    out.append(predict_caterpillar(g))
    return out


def check_predictions(predictions: Sequence[Prediction], rho: int) -> bool:
    """All non-membership predictions agree with ``rho``; membership means ``rho == 0``."""
    for p in predictions:
        if p.kind == MEMBERSHIP:
            if (rho == 0) != bool(p.value):
                return False
        elif not p.admits(rho):
            return False
    return True
