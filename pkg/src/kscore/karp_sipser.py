"""Karp-Sipser leaf removal and the full Karp-Sipser matching heuristic.

Peeling runs in synchronized rounds: all current degree-1 vertices are
collected, then processed in a seeded random order.  A collected leaf whose
neighbour has already been removed in the same round has degree 0 by the
time it is reached and is discarded as isolated.  The surviving vertices
after ``t`` rounds are the undeleted vertices of residual degree at least 2;
once no leaf is left these form the Karp-Sipser core.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph_gen import MultiGraph


@dataclass(frozen=True)
class PeelResult:
    core_vertices: frozenset
    matching: tuple
    rounds: int
    removal_trace: tuple
    terminated: bool = True
    history: tuple | None = field(default=None, repr=False)

    def survivors(self, t: int) -> frozenset:
        """Survivor set after ``t`` rounds (needs ``record_history=True``)."""
        if self.history is None:
            raise ValueError("peel was run without record_history")
        return self.history[min(t, len(self.history) - 1)]


@dataclass(frozen=True)
class MatchingResult:
    matching: tuple
    phase1_size: int
    phase2_size: int


class _Peeler:
    """Mutable working state; the input graph is never touched."""

    def __init__(self, g: MultiGraph):
        self.edges = g.edges.tolist()
        self.deg = g.degrees.tolist()
        self.alive = [d > 0 for d in self.deg]
        self.edge_alive = [True] * g.m
        inc = [[] for _ in range(g.n)]
        for e, (u, v) in enumerate(self.edges):
            inc[u].append(e)
            if v != u:
                inc[v].append(e)
        self.inc = inc
        self.candidates = {v for v, d in enumerate(self.deg) if d == 1}

    def neighbour(self, v: int) -> int:
        for e in self.inc[v]:
            if self.edge_alive[e]:
                a, b = self.edges[e]
                return b if a == v else a
        raise AssertionError(f"vertex {v} has no live edge")

    def remove(self, x: int) -> None:
        self.alive[x] = False
        deg, edge_alive, edges = self.deg, self.edge_alive, self.edges
        for e in self.inc[x]:
            if edge_alive[e]:
                edge_alive[e] = False
                a, b = edges[e]
                deg[a] -= 1
                deg[b] -= 1
                y = b if a == x else a
                if deg[y] <= 1 and self.alive[y]:
                    self.candidates.add(y)

    def sweep(self, rng) -> list:
        """One synchronized round; returns the matched ``(leaf, partner)`` pairs."""
        leaves = sorted(v for v in self.candidates if self.alive[v] and self.deg[v] == 1)
        self.candidates = set()
        pairs = []
        for v in rng.permutation(leaves).tolist() if leaves else ():
            if not self.alive[v]:
                continue
            if self.deg[v] == 0:
                self.alive[v] = False
                continue
            u = self.neighbour(v)
            pairs.append((v, u))
            self.remove(v)
            self.remove(u)
        self.drop_isolated()
        return pairs

    def drop_isolated(self) -> None:
        for y in [y for y in self.candidates if self.alive[y] and self.deg[y] == 0]:
            self.alive[y] = False
            self.candidates.discard(y)

    def has_leaf(self) -> bool:
        return any(self.alive[v] and self.deg[v] == 1 for v in self.candidates)

    def survivors(self) -> frozenset:
        return frozenset(v for v, ok in enumerate(self.alive) if ok and self.deg[v] >= 2)


def peel(g: MultiGraph, order_seed=None, max_rounds: int | None = None,
         record_history: bool = False) -> PeelResult:
    """Leaf-removal phase of Karp-Sipser.

    Parameters
    ----------
    g : MultiGraph
    order_seed : seed for the within-round processing order.
    max_rounds : stop after this many rounds (``None`` runs to exhaustion).
    record_history : keep the survivor set after every round.
    """
    state = _Peeler(g)
    rng = np.random.default_rng(order_seed)
    trace, matching = [], []
    history = [state.survivors()] if record_history else None
    rounds = 0
    while state.has_leaf() and (max_rounds is None or rounds < max_rounds):
        pairs = state.sweep(rng)
        rounds += 1
        trace.append(tuple(pairs))
        matching.extend(pairs)
        if record_history:
            history.append(state.survivors())
    return PeelResult(
        core_vertices=state.survivors(),
        matching=tuple(matching),
        rounds=rounds,
        removal_trace=tuple(trace),
        terminated=not state.has_leaf(),
        history=tuple(history) if record_history else None,
    )


def core_fraction(g: MultiGraph, order_seed=None) -> float:
    return len(peel(g, order_seed).core_vertices) / g.n if g.n else 0.0


def full_matching(g: MultiGraph, order_seed=None, phase2_seed=None) -> MatchingResult:
    """Peel to exhaustion, then match a uniformly random
    surviving edge and return to peeling, until no edge is left.

    Self-loops cannot be matched; when only self-loops remain the run stops.
    """
    state = _Peeler(g)
    rng = np.random.default_rng(order_seed)
    pick_rng = np.random.default_rng(phase2_seed)
    pool = [e for e, (a, b) in enumerate(state.edges) if a != b]
    phase1, phase2 = [], []
    while True:
        while state.has_leaf():
            phase1.extend(state.sweep(rng))
        chosen = None
        while pool:
            j = int(pick_rng.integers(len(pool)))
            e = pool[j]
            if state.edge_alive[e]:
                chosen = e
                break
            pool[j] = pool[-1]
            pool.pop()
        if chosen is None:
            break
        x, y = state.edges[chosen]
        phase2.append((x, y))
        state.remove(x)
        state.remove(y)
        state.drop_isolated()
    return MatchingResult(tuple(phase1 + phase2), len(phase1), len(phase2))
