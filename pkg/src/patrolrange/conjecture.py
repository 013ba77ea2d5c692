"""Explorer for the chordal-graph characterisation of the range.

On a chordal graph the range is expected to reach ``rho`` exactly when a
triod of size at least ``2 rho`` or a clique-triod of size at least
``2 rho - 1`` sits inside it as a weak retract. The explorer solves the
game, looks for such induced subgraphs and tries the nearest-vertex map as
a retraction. It only ever reports; a missing witness is not a disproof,
since retractions other than the nearest-vertex one are never tried.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .formulas import (CLIQUE_TRIOD, TRIOD, conjecture_threshold, find_induced_clique_triod,
                       find_induced_triod, triangles)
from .graph import DomainError, Graph, is_chordal
from .retracts import retract_lower_bound
from .solver import range_of

CONSISTENT = "consistent"
WITNESS_MISSING = "witness-missing"
COUNTEREXAMPLE = "COUNTEREXAMPLE-CANDIDATE"


@dataclass
class Candidate:
    shape: str
    vertices: list[int]
    size: int
    retract: bool

    def to_dict(self) -> dict:
        return {"shape": self.shape, "vertices": self.vertices, "size": self.size,
                "retraction_witness": self.retract}


@dataclass
class ConjectureReport:
    rho: int
    range: int
    candidates: list[Candidate] = field(default_factory=list)
    status: str = CONSISTENT
    note: str = ""

    @property
    def witnesses(self) -> list[Candidate]:
        return [c for c in self.candidates if c.retract]

    def to_dict(self) -> dict:
        return {"rho": self.rho, "range": self.range,
                "candidates": [c.to_dict() for c in self.candidates],
                "candidates_found": len(self.candidates),
                "witnesses_found": len(self.witnesses),
                "status": self.status, "note": self.note}


def _candidates(g: Graph, rho: int, budget: int) -> list[Candidate]:
    out = []
    seen = set()
    length = conjecture_threshold(TRIOD, rho)
    for v in g.vertices:
        legs = find_induced_triod(g, v, length, budget)
        if legs is None:
            continue
        vertices = sorted({v} | {w for leg in legs for w in leg})
        seen.add((TRIOD, tuple(vertices)))
        out.append(Candidate(TRIOD, vertices, length,
                             retract_lower_bound(g, TRIOD, vertices, length) is not None))
    length = conjecture_threshold(CLIQUE_TRIOD, rho)
    for tri in triangles(g):
        found = find_induced_clique_triod(g, length, budget, triangle=tri)
        if found is None:
            continue
        _, legs = found
        vertices = sorted({w for leg in legs for w in leg})
        if (CLIQUE_TRIOD, tuple(vertices)) in seen:
            continue
        seen.add((CLIQUE_TRIOD, tuple(vertices)))
        out.append(Candidate(CLIQUE_TRIOD, vertices, length,
                             retract_lower_bound(g, CLIQUE_TRIOD, vertices, length) is not None))
    return out


def conjecture_check(g: Graph, rho: int, budget: int | None = None,
                     search_budget: int = 2_000_000) -> ConjectureReport:
    """Compare the solved range against retract witnesses at threshold ``rho``.

    A witness forces ``range >= rho``, so a witness with a smaller range, or
    a range of at least ``rho`` with no candidate subgraph at all, is flagged
    as a counterexample candidate. A large range whose candidates all lack a
    nearest-vertex retraction is only ``witness-missing``.
    """
    if rho < 2:
        raise DomainError("the conjecture is stated for rho >= 2")
    if not is_chordal(g):
        raise DomainError("conjecture_check needs a chordal graph")
    value, _ = range_of(g, budget=budget)
    cands = _candidates(g, rho, search_budget)
    report = ConjectureReport(rho, value, cands)
    has_witness = bool(report.witnesses)
    if value >= rho:
        if has_witness:
            report.status = CONSISTENT
        elif cands:
            report.status = WITNESS_MISSING
            report.note = "candidates exist but none retracts by the nearest-vertex map"
        else:
            report.status = COUNTEREXAMPLE
            report.note = "range reaches rho with no induced candidate of the required size"
    elif has_witness:
        report.status = COUNTEREXAMPLE
        report.note = "a verified retract forces a larger range than the solver found"
    else:
        report.status = CONSISTENT
    return report


def random_chordal_graph(n: int, seed: int, max_clique: int = 4) -> Graph:
    """Grow a chordal graph by attaching each new vertex to part of an existing clique.

    Every new vertex is simplicial when added, so the result is chordal and
    connected. The distribution is not uniform over chordal graphs; it
    favours tree-like clique trees with small cliques.
    """
    if n < 1:
        raise DomainError("random_chordal_graph needs n >= 1")
    rng = random.Random(seed)
    cliques: list[list[int]] = [[0]]
    edges = []
    for v in range(1, n):
        base = rng.choice(cliques)
        k = rng.randint(1, min(len(base), max_clique - 1))
        nbrs = sorted(rng.sample(base, k))
        edges.extend((u, v) for u in nbrs)
        clique = nbrs + [v]
        if set(nbrs) == set(base):
            cliques.remove(base)
        cliques.append(clique)
    return Graph(n, edges, meta={"kind": "chordal", "seed": seed, "name": f"chordal{n}_{seed}"})
