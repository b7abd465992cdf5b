"""Warning Propagation with messages L < M < U on a multigraph.

Messages live on directed edge instances (see :mod:`kscore.graph_gen` for the
numbering).  One synchronous round recomputes every message ``u -> v`` from
the messages arriving at ``u`` on all other instances:

* ``L`` if every other incoming message is ``M`` (vacuously true for a leaf),
* ``M`` if at least one other incoming message is ``L``,
* ``U`` otherwise.

For parallel edges only the paired reverse instance is excluded; the two
instances of a self-loop at ``u`` arrive at ``u`` like any other message.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraph, InternalError
from .graph_gen import MultiGraph

L, M, U = 0, 1, 2
SYMBOLS = "LMU"


@dataclass(frozen=True, eq=False)
class MessageState:
    values: np.ndarray  # int8 per directed instance, codes L=0, M=1, U=2
    round: int = 0

    def __eq__(self, other):
        return isinstance(other, MessageState) and np.array_equal(self.values, other.values)

    def message(self, instance: int) -> str:
        return SYMBOLS[self.values[instance]]


@dataclass(frozen=True, eq=False)
class LabelState:
    values: np.ndarray  # per vertex, M=1 or U=2
    round: int = 0

    def u_vertices(self) -> frozenset:
        return frozenset(np.flatnonzero(self.values == U).tolist())


@dataclass(frozen=True)
class WPRun:
    state: MessageState
    rounds_to_fix: int
    changes: list  # number of messages changed in round t (t = 1..)
    history: list | None = None


def wp_init(g: MultiGraph) -> MessageState:
    return MessageState(np.full(2 * g.m, U, dtype=np.int8), 0)


def _incoming_counts(g: MultiGraph, values: np.ndarray):
    dst = g.dst
    return [np.bincount(dst[values == c], minlength=g.n) for c in (L, M, U)]


def wp_round(g: MultiGraph, state: MessageState) -> MessageState:
    vals = state.values
    if not len(vals):
        return MessageState(vals, state.round + 1)
    n_l, n_m, _ = _incoming_counts(g, vals)
    src = g.src
    rev = vals[np.arange(len(vals)) ^ 1]
    others = g.degrees[src] - 1
    others_l = n_l[src] - (rev == L)
    others_m = n_m[src] - (rev == M)
    new = np.where(others_l > 0, M, np.where(others_m == others, L, U)).astype(np.int8)
    return MessageState(new, state.round + 1)


def wp_run(g: MultiGraph, record: bool = False) -> WPRun:
    """Iterate rounds until nothing changes.

    ``rounds_to_fix`` is the first ``t`` with state ``t + 1`` equal to
    state ``t``.  Every message changes at most once (from ``U``), so a run
    needs at most ``2|E|`` rounds; going past that raises
    :class:`InternalError`.
    """
    state = wp_init(g)
    history = [state.values] if record else None
    changes = []
    while True:
        nxt = wp_round(g, state)
        changed = int(np.count_nonzero(nxt.values != state.values))
        if changed == 0:
            return WPRun(state, state.round, changes, history)
        changes.append(changed)
        state = nxt
        if record:
            history.append(state.values)
        if state.round > 2 * g.m:
            raise InternalError(f"no fixed point after {state.round} rounds on {g.m} edges")


def label_nodes(g: MultiGraph, state: MessageState) -> LabelState:
    """``U`` iff no incoming ``L`` and at least two incoming ``U``; else ``M``."""
    n_l, _, n_u = _incoming_counts(g, state.values)
    labels = np.where((n_l == 0) & (n_u >= 2), U, M).astype(np.int8)
    return LabelState(labels, state.round)


def survivors_after(g: MultiGraph, t: int, order_seed=None) -> frozenset:
    """Vertices labelled ``U`` after ``2t`` rounds.

    Coincides with the peel survivors after ``t`` rounds; ``order_seed`` is
    accepted for interface symmetry and has no effect.
    """
    state = wp_init(g)
    for _ in range(2 * t):
        state = wp_round(g, state)
    return label_nodes(g, state).u_vertices()


def wp_core_fraction(g: MultiGraph) -> float:
    if g.n == 0:
        return 0.0
    run = wp_run(g)
    return len(label_nodes(g, run.state).u_vertices()) / g.n


def wp_core(g: MultiGraph) -> frozenset:
    return label_nodes(g, wp_run(g).state).u_vertices()


def message_histogram(state: MessageState) -> tuple[float, float, float]:
    if not len(state.values):
        raise EmptyGraph("no directed edges")
    counts = np.bincount(state.values, minlength=3) / len(state.values)
    return float(counts[L]), float(counts[M]), float(counts[U])
