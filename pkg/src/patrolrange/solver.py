"""Exact solver for the fixed-patrol game.

The cop gets no information during play, so a strategy is nothing more than
a walk fixed in advance. Against an omniscient robber, the only thing that
matters about a patrol prefix is the cop's current vertex and the set of
vertices the robber could occupy without having been captured. Deciding
whether some patrol wins is therefore plain reachability over
``(cop, survivors)`` states:

* start ``(c0, V \\ B(c0))`` for every ``c0``;
* cop moves ``c -> c'`` with ``c'`` in ``N[c]``; the robber is caught unless he
  was outside ``B(c')``, leaving ``A = S \\ B(c')``;
* the robber then steps or stays, but never into ``B(c')``:
  ``S' = N[A] \\ B(c')``.

A patrol wins as soon as ``A`` is empty. Breadth-first search with a fixed
vertex order returns the shortest winning patrol, lexicographically least
among the shortest. When no win is reachable, the full set of reachable
states is closed under every cop move and serves as the cop-loss
certificate.
"""
from __future__ import annotations

import io
import os
import struct
import time
from dataclasses import dataclass, field
from typing import BinaryIO, Iterator, Sequence

import numpy as np

from . import vertexset as vs
from .graph import DomainError, Graph, closed_neighborhood, graph_radius, validate_walk

DEFAULT_BUDGET = int(float(os.environ.get("PATROLRANGE_BUDGET", 2e8)))
# n * 2**n visited bits in a dense bitmap: 25 vertices is ~100 MB.
DENSE_LIMIT = 25

WIN, LOSS, UNDECIDED = "win", "loss", "undecided"


class BudgetExceeded(RuntimeError):
    """The state budget ran out before the search settled the question."""

    def __init__(self, rho: int, states: int, budget: int):
        super().__init__(f"undecided at budget: {states} state visits exceed {budget} (rho={rho})")
        self.rho = rho
        self.states = states
        self.budget = budget


@dataclass
class Certificate:
    """Set of reachable ``(cop, survivors)`` states closed under all cop moves.

    With ``dominance=True`` the set is an antichain instead: every successor
    only has to contain some certificate state of the same cop.
    """

    n: int
    rho: int
    cops: list[int]
    masks: list[int]
    dominance: bool = False

    def __len__(self) -> int:
        return len(self.cops)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return zip(self.cops, self.masks)

    def states(self) -> set[tuple[int, int]]:
        return set(zip(self.cops, self.masks))

    def write(self, fh: BinaryIO) -> None:
        """Textual header line, then one length-prefixed record per state."""
        kind = "dominance" if self.dominance else "closed"
        fh.write(f"PATROLCERT 1 n={self.n} rho={self.rho} kind={kind} "
                 f"states={len(self)}\n".encode("ascii"))
        width = (self.n + 7) // 8
        for c, mask in self:
            body = struct.pack("<H", c) + mask.to_bytes(width, "little")
            fh.write(struct.pack("<I", len(body)))
            fh.write(body)

    def to_bytes(self) -> bytes:
        buf = io.BytesIO()
        self.write(buf)
        return buf.getvalue()

    @classmethod
    def read(cls, fh: BinaryIO) -> "Certificate":
        header = fh.readline().decode("ascii").split()
        if len(header) < 2 or header[0] != "PATROLCERT" or header[1] != "1":
            raise ValueError("not a PATROLCERT v1 stream")
        fields = dict(item.split("=", 1) for item in header[2:])
        n, rho, count = int(fields["n"]), int(fields["rho"]), int(fields["states"])
        cops, masks = [], []
        for i in range(count):
            raw = fh.read(4)
            if len(raw) != 4:
                raise ValueError(f"certificate truncated at record {i}")
            (length,) = struct.unpack("<I", raw)
            body = fh.read(length)
            if len(body) != length or length < 2:
                raise ValueError(f"certificate record {i} is malformed")
            cops.append(struct.unpack("<H", body[:2])[0])
            masks.append(int.from_bytes(body[2:], "little"))
        return cls(n, rho, cops, masks, dominance=fields.get("kind") == "dominance")

    @classmethod
    def from_bytes(cls, data: bytes) -> "Certificate":
        return cls.read(io.BytesIO(data))


@dataclass
class SolveResult:
    rho: int
    outcome: str
    witness: list[int] | None = None
    certificate: Certificate | None = None
    states: int = 0
    millis: int = 0

    @property
    def cop_wins(self) -> bool:
        return self.outcome == WIN

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "rho": self.rho,
            "outcome": self.outcome,
            "witness": self.witness if self.witness is not None else [],
            "certificate_size": len(self.certificate) if self.certificate is not None else 0,
            "states": self.states,
        }
        if timing:
            out["millis"] = self.millis
        return out


@dataclass
class CertificateCheck:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class BestResponse:
    """Outcome of the omniscient robber's reply to one fixed patrol."""

    captured: bool
    capture_time: int | None = None
    evasion: list[int] | None = None
    survivors: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"captured": self.captured, "capture_time": self.capture_time,
                "evasion": self.evasion}


# -- search engines ------------------------------------------------------------

def _moves(g: Graph) -> list[tuple[int, ...]]:
    # closed neighbourhoods in increasing vertex order; fixes the BFS tie-break
    return [tuple(vs.members(c)) for c in g.closed]


def _bfs_python(g: Graph, rho: int, budget: int, prune: bool):
    balls = g.balls(rho)
    full = g.all
    moves = _moves(g)
    level = []
    for c in range(g.n):
        s = full & ~balls[c]
        if s == 0:
            return [c], None, g.n
        level.append((c, s))
    parents = [[-1] * len(level)]
    levels = [level]
    states = g.n
    if prune:
        # Survivor dynamics are monotone: T <= S means every patrol that wins
        # from (c, S) wins from (c, T) at the same step. Keeping only minimal
        # survivor sets per cop therefore preserves both outcome and the
        # length of the shortest win.
        antichain: list[list[int]] = [[] for _ in range(g.n)]
        for c, s in level:
            antichain[c].append(s)
    else:
        seen = set(level)
    while True:
        nxt, nxt_parent = [], []
        fresh = {}
        for i, (c, s) in enumerate(level):
            for c2 in moves[c]:
                a = s & ~balls[c2]
                states += 1
                if a == 0:
                    return _trace(levels, parents, i) + [c2], None, states
                s2 = closed_neighborhood(g, a) & ~balls[c2]
                key = (c2, s2)
                if prune:
                    if key in fresh or any(t & ~s2 == 0 for t in antichain[c2]):
                        continue
                    antichain[c2] = [t for t in antichain[c2] if s2 & ~t != 0]
                    antichain[c2].append(s2)
                else:
                    if key in seen:
                        continue
                    seen.add(key)
                fresh[key] = None
                nxt.append(key)
                nxt_parent.append(i)
            if states > budget:
                raise BudgetExceeded(rho, states, budget)
        if prune:
            alive = {(c, t) for c in range(g.n) for t in antichain[c]}
            keep = [j for j, key in enumerate(nxt) if key in alive]
            nxt = [nxt[j] for j in keep]
            nxt_parent = [nxt_parent[j] for j in keep]
        if not nxt:
            if prune:
                cops = [c for c in range(g.n) for _ in antichain[c]]
                masks = [t for c in range(g.n) for t in antichain[c]]
                return None, Certificate(g.n, rho, cops, masks, dominance=True), states
            cops = [c for lvl in levels for c, _ in lvl]
            masks = [s for lvl in levels for _, s in lvl]
            return None, Certificate(g.n, rho, cops, masks), states
        levels.append(nxt)
        parents.append(nxt_parent)
        level = nxt


def _trace(levels, parents, index: int) -> list[int]:
    path = []
    for depth in range(len(levels) - 1, -1, -1):
        path.append(int(levels[depth][index][0]))
        index = parents[depth][index]
    return path[::-1]


def _bfs_numpy(g: Graph, rho: int, budget: int):
    n = g.n
    balls = np.array(g.balls(rho), dtype=np.uint64)
    notball = ~balls
    full = np.uint64(g.all)
    moves = _moves(g)
    width = max(len(m) for m in moves)
    move_table = np.full((n, width), -1, dtype=np.int64)
    for c, m in enumerate(moves):
        move_table[c, :len(m)] = m
    ntab = np.array(g.neighborhood_table(), dtype=np.uint64)
    chunks = ntab.shape[0]
    shift_n = np.uint64(n)
    byte_mask = np.uint64(0xFF)

    cops = np.arange(n, dtype=np.int64)
    masks = full & notball
    empty = np.flatnonzero(masks == 0)
    if empty.size:
        return [int(empty[0])], None, n
    visited = np.zeros(((n << n) >> 3) + 1, dtype=np.uint8)
    keys = (cops.astype(np.uint64) << shift_n) | masks
    np.bitwise_or.at(visited, (keys >> np.uint64(3)).astype(np.int64),
                     (np.uint8(1) << (keys & np.uint64(7)).astype(np.uint8)))
    level_cops = [cops.astype(np.int16)]
    level_masks = [masks]
    level_parents = [np.full(n, -1, dtype=np.int32)]
    states = n
    while True:
        succ = move_table[cops]
        rows, slots = np.nonzero(succ >= 0)
        nxt = succ[rows, slots]
        states += rows.size
        if states > budget:
            raise BudgetExceeded(rho, states, budget)
        a = masks[rows] & notball[nxt]
        won = np.flatnonzero(a == 0)
        if won.size:
            k = int(won[0])
            path = _trace_arrays(level_cops, level_parents, int(rows[k]))
            return path + [int(nxt[k])], None, states
        na = np.zeros_like(a)
        for b in range(chunks):
            na |= ntab[b][((a >> np.uint64(8 * b)) & byte_mask).astype(np.int64)]
        s2 = na & notball[nxt]
        keys = (nxt.astype(np.uint64) << shift_n) | s2
        uniq, first = np.unique(keys, return_index=True)
        byte = (uniq >> np.uint64(3)).astype(np.int64)
        bit = np.uint8(1) << (uniq & np.uint64(7)).astype(np.uint8)
        fresh = (visited[byte] & bit) == 0
        if not fresh.any():
            cert = Certificate(n, rho,
                               np.concatenate(level_cops).astype(int).tolist(),
                               [int(x) for x in np.concatenate(level_masks)])
            return None, cert, states
        np.bitwise_or.at(visited, byte[fresh], bit[fresh])
        first = np.sort(first[fresh])
        cops = nxt[first]
        masks = s2[first]
        level_cops.append(cops.astype(np.int16))
        level_masks.append(masks)
        level_parents.append(rows[first].astype(np.int32))


def _trace_arrays(level_cops, level_parents, index: int) -> list[int]:
    path = []
    for depth in range(len(level_cops) - 1, -1, -1):
        path.append(int(level_cops[depth][index]))
        index = int(level_parents[depth][index])
    return path[::-1]


# -- public operations -------------------------------------------------------

def cop_wins(g: Graph, rho: int, budget: int | None = None, prune: bool = False,
             engine: str = "auto") -> SolveResult:
    """Decide whether some patrol catches every robber at capture radius ``rho``.

    ``engine`` is ``"numpy"`` (n <= 25), ``"python"`` or ``"auto"``. Pruning
    keeps only minimal survivor sets per cop and yields a dominance
    certificate on cop-loss; it always uses the Python engine.
    """
    if rho < 0:
        raise DomainError(f"radius must be non-negative, got {rho}")
    budget = DEFAULT_BUDGET if budget is None else budget
    if engine == "auto":
        engine = "numpy" if g.n <= DENSE_LIMIT and not prune else "python"
    if engine == "numpy" and (prune or g.n > DENSE_LIMIT):
        raise DomainError(f"numpy engine supports n <= {DENSE_LIMIT} without pruning")
    start = time.perf_counter()
    if engine == "numpy":
        witness, cert, states = _bfs_numpy(g, rho, budget)
    else:
        witness, cert, states = _bfs_python(g, rho, budget, prune)
    millis = int((time.perf_counter() - start) * 1000)
    outcome = WIN if witness is not None else LOSS
    return SolveResult(rho, outcome, witness, cert, states, millis)


def range_of(g: Graph, budget: int | None = None, max_rho: int | None = None,
             prune: bool = False) -> tuple[int | None, list[SolveResult]]:
    """Least ``rho`` with a winning patrol, by ascending scan from 0.

    Returns ``(None, results)`` when ``max_rho`` stops the scan before a win.
    """
    top = graph_radius(g)
    if max_rho is not None:
        top = min(top, max_rho)
    results = []
    for rho in range(top + 1):
        res = cop_wins(g, rho, budget=budget, prune=prune)
        results.append(res)
        if res.cop_wins:
            return rho, results
    return None, results


def best_response(g: Graph, patrol: Sequence[int], rho: int) -> BestResponse:
    """Run the omniscient robber against one patrol.

    Returns the first step at which every robber is caught, or an evasion
    walk of the same length as the patrol that keeps distance greater than
    ``rho`` both before and after each cop move.
    """
    if not validate_walk(g, patrol):
        raise DomainError("patrol is not a valid walk")
    balls = g.balls(rho)
    s = g.all & ~balls[patrol[0]]
    history = [s]
    if s == 0:
        return BestResponse(True, 0, survivors=[0])
    arrivals = [s]
    for t in range(1, len(patrol)):
        a = s & ~balls[patrol[t]]
        if a == 0:
            return BestResponse(True, t, survivors=[vs.size(x) for x in history])
        s = closed_neighborhood(g, a) & ~balls[patrol[t]]
        arrivals.append(a)
        history.append(s)
    # trace back: r[t] in history[t], r[t-1] in arrivals[t] adjacent-or-equal to r[t]
    robber = [vs.lowest(history[-1])]
    for t in range(len(patrol) - 1, 0, -1):
        robber.append(vs.lowest(arrivals[t] & g.closed[robber[-1]]))
    robber.reverse()
    return BestResponse(False, None, robber, [vs.size(x) for x in history])


def verify_certificate(g: Graph, rho: int, cert: Certificate) -> CertificateCheck:
    """Check that ``cert`` proves that no patrol wins at radius ``rho``."""
    if len(cert) == 0:
        return CertificateCheck(False, "certificate is empty")
    if cert.n != g.n or cert.rho != rho:
        return CertificateCheck(False, f"certificate is for n={cert.n}, rho={cert.rho}")
    balls = g.balls(rho)
    by_cop: dict[int, list[int]] = {}
    members = set()
    for c, s in cert:
        if not 0 <= c < g.n or s & ~g.all:
            return CertificateCheck(False, f"state ({c}, {s:#x}) is outside the graph")
        if s & balls[c]:
            return CertificateCheck(False, f"state ({c}, {s:#x}) has survivors inside the cop's ball")
        members.add((c, s))
        by_cop.setdefault(c, []).append(s)

    def covered(c: int, s: int) -> bool:
        if not cert.dominance:
            return (c, s) in members
        return any(t & ~s == 0 for t in by_cop.get(c, ()))

    for c in range(g.n):
        s0 = g.all & ~balls[c]
        if s0 == 0:
            return CertificateCheck(False, f"cop starting at {c} sees every vertex at placement")
        if not covered(c, s0):
            return CertificateCheck(False, f"initial state for start {c} is not covered")
    for c, s in cert:
        for c2 in vs.members(g.closed[c]):
            a = s & ~balls[c2]
            if a == 0:
                return CertificateCheck(False, f"move {c}->{c2} from state {s:#x} captures")
            s2 = closed_neighborhood(g, a) & ~balls[c2]
            if not covered(c2, s2):
                return CertificateCheck(False, f"successor of ({c}, {s:#x}) via {c2} not covered")
    return CertificateCheck(True)
