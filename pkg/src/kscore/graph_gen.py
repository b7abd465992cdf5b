"""Configuration-model multigraphs built by uniform half-edge pairing.

Edges are stored as an ``(m, 2)`` integer array in pairing order.  Each
undirected edge ``e`` yields two directed instances: ``2e`` runs
``edges[e, 0] -> edges[e, 1]`` and ``2e + 1`` runs the other way, so the
reverse of instance ``i`` is ``i ^ 1``.  A self-loop contributes two
instances (and degree 2) at its vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import OddTotalDegree, ValidationError
from .seeding import mix_seed


@dataclass(frozen=True, eq=False)
class MultiGraph:
    n: int
    edges: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        if len(edges) and (edges.min() < 0 or edges.max() >= self.n):
            raise ValidationError("edge endpoint out of range")

    @classmethod
    def from_edges(cls, n: int, edges) -> "MultiGraph":
        return cls(n, np.asarray(list(edges), dtype=np.int64).reshape(-1, 2))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)

    @cached_property
    def src(self) -> np.ndarray:
        """Source vertex of every directed instance."""
        return self.edges.ravel()

    @cached_property
    def dst(self) -> np.ndarray:
        """Target vertex of every directed instance."""
        return self.edges[:, ::-1].ravel()

    @cached_property
    def _csr(self):
        order = np.argsort(self.src, kind="stable")
        offsets = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=offsets[1:])
        return offsets, order

    def out_instances(self, v: int) -> np.ndarray:
        """Directed instances leaving ``v`` (one per incident half-edge)."""
        offsets, order = self._csr
        return order[offsets[v]:offsets[v + 1]]

    @cached_property
    def incidence(self) -> list[list[tuple[int, int]]]:
        """Per vertex, the ``(edge index, endpoint slot)`` pairs of its half-edges."""
        inc = [[] for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges.tolist()):
            inc[u].append((e, 0))
            inc[v].append((e, 1))
        return inc

    def edge_multiset(self) -> list[tuple[int, int]]:
        return sorted((min(u, v), max(u, v)) for u, v in self.edges.tolist())

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges.tolist():
            adj[u].append(v)
            adj[v].append(u)
        return adj


@dataclass(frozen=True)
class GraphStats:
    self_loop_count: int
    multi_edge_count: int
    isolated_count: int


def pair_half_edges(degrees, seed) -> MultiGraph:
    """Uniform perfect matching of the half-edges: shuffle, then pair neighbours."""
    degrees = np.asarray(degrees, dtype=np.int64)
    if degrees.ndim != 1 or (degrees < 0).any():
        raise ValidationError("degrees must be a sequence of non-negative integers")
    if degrees.sum() % 2:
        raise OddTotalDegree(f"total degree {int(degrees.sum())} is odd")
    stubs = np.repeat(np.arange(len(degrees)), degrees)
    rng = np.random.default_rng(seed)
    rng.shuffle(stubs)
    return MultiGraph(len(degrees), stubs.reshape(-1, 2))


def erase_to_simple(g: MultiGraph) -> MultiGraph:
    """Drop self-loops and collapse parallel edges (first occurrence kept)."""
    e = g.edges
    e = e[e[:, 0] != e[:, 1]]
    key = np.sort(e, axis=1)
    _, first = np.unique(key, axis=0, return_index=True)
    return MultiGraph(g.n, e[np.sort(first)])


def stats(g: MultiGraph) -> GraphStats:
    e = g.edges
    loops = int((e[:, 0] == e[:, 1]).sum())
    key = np.sort(e[e[:, 0] != e[:, 1]], axis=1)
    multi = 0
    if len(key):
        _, counts = np.unique(key, axis=0, return_counts=True)
        multi = int((counts - 1).sum())
    return GraphStats(loops, multi, int((g.degrees == 0).sum()))


def write_edge_list(g: MultiGraph, path) -> None:
    lines = [f"# n={g.n} m={g.m}"] + [f"{u} {v}" for u, v in g.edges.tolist()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path) -> MultiGraph:
    text = Path(path).read_text().splitlines()
    header = dict(tok.split("=") for tok in text[0].lstrip("# ").split())
    edges = [tuple(map(int, line.split())) for line in text[1:] if line.strip()]
    g = MultiGraph.from_edges(int(header["n"]), edges)
    if g.m != int(header["m"]):
        raise ValidationError(f"header says m={header['m']}, found {g.m} edges")
    return g


def configuration_model(dist, n: int, seed, simple: bool = False) -> MultiGraph:
    """Sample degrees i.i.d. from ``dist`` and pair them (optionally erased)."""
    from .degree_model import sample_degree_sequence

    degrees = sample_degree_sequence(dist, n, mix_seed(seed, 0))
    g = pair_half_edges(degrees, mix_seed(seed, 1))
    return erase_to_simple(g) if simple else g
