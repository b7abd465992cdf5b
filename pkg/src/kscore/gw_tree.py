"""Unimodular Galton-Watson trees and Warning Propagation on them.

The root draws its child count from ``(p_k)``; every other vertex draws from
the size-biased offspring law ``p_hat``.  Trees are stored breadth-first as
flat arrays, so the children of a vertex are contiguous and a whole forest of
independent trees can be sampled and processed level by level with numpy.

Only upward messages ``child -> parent`` exist.  A vertex at level ``l``
needs true child counts down to level ``l + t - 1`` to get its round-``t``
message right, so the root's children need a tree of depth ``t + 1``.
Vertices at the truncation level are given no children.

For long horizons an exact tree of depth ``t + 1`` is exponentially large.
:func:`root_survival_mc` then switches to population dynamics: a pool of
round-``s`` messages is refreshed by letting each new vertex draw its children
with replacement from the previous pool.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .degree_model import DegreeDistribution
from .errors import BadParameter, DepthTooShallow, TreeTooLarge
from .seeding import mix_seed
from .warning_prop import L, M, U

MAX_EXPECTED_NODES = 1e8
EXACT_WORK_LIMIT = 5e7  # expected tree vertices summed over all trials
BLOCK = 4096  # trees per vectorized block
POOL_SIZE = 1 << 21


@dataclass(frozen=True, eq=False)
class GWTree:
    """Depth-truncated rooted tree in breadth-first order.

    Vertex 0 is the root (``parent[0] == -1``).  ``n_children[v]`` is the
    number of children of ``v``; they occupy ``first_child[v]`` onward.
    """

    parent: np.ndarray
    level: np.ndarray
    n_children: np.ndarray
    depth: int

    @property
    def size(self) -> int:
        return len(self.parent)

    @property
    def first_child(self) -> np.ndarray:
        return 1 + np.concatenate(([0], np.cumsum(self.n_children)[:-1]))

    def children(self, v: int) -> np.ndarray:
        start = self.first_child[v]
        return np.arange(start, start + self.n_children[v])

    def is_root(self, v: int) -> bool:
        return self.parent[v] < 0


class _Forest:
    """Many independent trees laid out level by level."""

    def __init__(self, parent, level, n_children, tree_id, n_trees):
        self.parent = parent
        self.level = level
        self.n_children = n_children
        self.tree_id = tree_id
        self.n_trees = n_trees


def expected_size(dist: DegreeDistribution, depth: int) -> float:
    """Expected vertex count of a tree truncated at ``depth``."""
    growth = dist.size_biased().mean
    levels = sum(growth ** j for j in range(depth))
    return 1.0 + dist.mean * levels


def _check_depth(dist, depth, cap):
    if depth < 0:
        raise BadParameter(f"depth must be non-negative, got {depth}")
    size = expected_size(dist, depth)
    if size > cap:
        raise TreeTooLarge(f"expected {size:.3g} vertices at depth {depth} exceeds cap {cap:.3g}")


def _sample_forest(dist: DegreeDistribution, depth: int, n_trees: int, rng) -> _Forest:
    root_p = dist.pmf
    hat_p = dist.size_biased().pmf
    counts = rng.choice(len(root_p), size=n_trees, p=root_p) if depth > 0 else np.zeros(n_trees, int)
    parents = [np.full(n_trees, -1)]
    levels = [np.zeros(n_trees, dtype=np.int64)]
    kids = [counts]
    tree = [np.arange(n_trees)]
    offset = 0
    for lvl in range(1, depth + 1):
        prev = kids[-1]
        ids = np.arange(offset, offset + len(prev))
        offset += len(prev)
        par = np.repeat(ids, prev)
        if lvl < depth:
            c = rng.choice(len(hat_p), size=len(par), p=hat_p)
        else:
            c = np.zeros(len(par), dtype=np.int64)
        parents.append(par)
        levels.append(np.full(len(par), lvl))
        kids.append(c)
        tree.append(np.repeat(tree[-1], prev))
    return _Forest(
        np.concatenate(parents),
        np.concatenate(levels),
        np.concatenate(kids).astype(np.int64),
        np.concatenate(tree),
        n_trees,
    )


def sample_tree(dist: DegreeDistribution, depth: int, seed=None,
                max_expected_nodes: float = MAX_EXPECTED_NODES) -> GWTree:
    """Sample one tree truncated at ``depth``; deterministic given ``seed``.

    Levels are drawn in order from a single generator, so the first ``d``
    levels of a deeper tree with the same seed coincide with a depth-``d``
    tree (apart from the counts at the truncation level itself).
    """
    _check_depth(dist, depth, max_expected_nodes)
    f = _sample_forest(dist, depth, 1, np.random.default_rng(seed))
    return GWTree(f.parent, f.level, f.n_children, depth)


def _upward_rounds(parent, n_children, t):
    """Yield child->parent messages for rounds ``0..t`` (entry per vertex;
    the root entry is meaningless)."""
    msgs = np.full(len(parent), U, dtype=np.int8)
    yield msgs
    has_parent = parent >= 0
    child = np.flatnonzero(has_parent)
    owner = parent[child]
    n = len(parent)
    for _ in range(t):
        cm = msgs[child]
        n_l = np.bincount(owner, weights=cm == L, minlength=n)
        n_m = np.bincount(owner, weights=cm == M, minlength=n)
        msgs = np.where(n_l > 0, M, np.where(n_m == n_children, L, U)).astype(np.int8)
        yield msgs


def wp_on_tree(tree: GWTree, t: int) -> np.ndarray:
    """Messages from the root's children to the root for rounds ``0..t``.

    Returns an ``(t + 1, k)`` int8 array with codes ``L, M, U`` where ``k`` is
    the number of root children.  Needs ``tree.depth >= t + 1``.
    """
    if t < 0:
        raise BadParameter(f"t must be non-negative, got {t}")
    if tree.depth < t + 1:
        raise DepthTooShallow(f"round {t} needs depth {t + 1}, tree has {tree.depth}")
    kids = tree.children(0)
    return np.array([m[kids] for m in _upward_rounds(tree.parent, tree.n_children, t)],
                    dtype=np.int8).reshape(t + 1, len(kids))


def root_label(messages: np.ndarray) -> int:
    """``U`` iff no incoming ``L`` and at least two incoming ``U``."""
    messages = np.asarray(messages)
    return U if (messages != L).all() and (messages == U).sum() >= 2 else M


def _blocks(trials):
    for b, start in enumerate(range(0, trials, BLOCK)):
        yield b, min(BLOCK, trials - start)


def message_frequencies(dist: DegreeDistribution, t_values, trials: int, seed=0,
                        max_expected_nodes: float = MAX_EXPECTED_NODES):
    """Empirical law of root-child messages over ``trials`` exact trees.

    All root children of all trees are pooled (they are i.i.d.).  Returns a
    dict ``t -> (freq, stderr, count)`` with ``freq`` and ``stderr`` arrays
    ordered ``(L, M, U)``.
    """
    t_values = sorted(set(int(t) for t in t_values))
    if trials < 1 or not t_values or t_values[0] < 0:
        raise BadParameter("need trials >= 1 and non-negative rounds")
    t_max = t_values[-1]
    _check_depth(dist, t_max + 1, max_expected_nodes)
    hist = {t: np.zeros(3) for t in t_values}
    for b, size in _blocks(trials):
        f = _sample_forest(dist, t_max + 1, size, np.random.default_rng(mix_seed(seed, b)))
        top = f.level == 1
        for r, msgs in enumerate(_upward_rounds(f.parent, f.n_children, t_max)):
            if r in hist:
                hist[r] += np.bincount(msgs[top], minlength=3)[:3]
    out = {}
    for t, h in hist.items():
        count = int(h.sum())
        freq = h / count if count else np.full(3, math.nan)
        err = np.sqrt(freq * (1 - freq) / count) if count else np.full(3, math.nan)
        out[t] = (freq, err, count)
    return out


def _survival_exact(dist, t, trials, seed, cap):
    _check_depth(dist, t + 1, cap)
    hits = 0
    for b, size in _blocks(trials):
        f = _sample_forest(dist, t + 1, size, np.random.default_rng(mix_seed(seed, b)))
        msgs = None
        for msgs in _upward_rounds(f.parent, f.n_children, t):
            pass
        top = np.flatnonzero(f.level == 1)
        owner = f.parent[top]  # roots are vertices 0..size-1
        n_l = np.bincount(owner, weights=msgs[top] == L, minlength=size)
        n_u = np.bincount(owner, weights=msgs[top] == U, minlength=size)
        hits += int(((n_l == 0) & (n_u >= 2)).sum())
    return hits


def pool_messages(dist: DegreeDistribution, t: int, pool_size: int, rng) -> np.ndarray:
    """Population-dynamics sample of round-``t`` child->parent messages."""
    hat_p = dist.size_biased().pmf
    pool = np.full(pool_size, U, dtype=np.int8)
    for _ in range(t):
        k = rng.choice(len(hat_p), size=pool_size, p=hat_p)
        drawn = pool[rng.integers(pool_size, size=int(k.sum()))]
        owner = np.repeat(np.arange(pool_size), k)
        n_l = np.bincount(owner, weights=drawn == L, minlength=pool_size)
        n_m = np.bincount(owner, weights=drawn == M, minlength=pool_size)
        pool = np.where(n_l > 0, M, np.where(n_m == k, L, U)).astype(np.int8)
    return pool


def _survival_pool(dist, t, trials, seed, pool_size):
    rng = np.random.default_rng(mix_seed(seed, 0))
    pool = pool_messages(dist, t, pool_size, rng)
    hits = 0
    for b, size in _blocks(trials):
        r = np.random.default_rng(mix_seed(seed, 1, b))
        k = r.choice(len(dist.pmf), size=size, p=dist.pmf)
        drawn = pool[r.integers(pool_size, size=int(k.sum()))]
        owner = np.repeat(np.arange(size), k)
        n_l = np.bincount(owner, weights=drawn == L, minlength=size)
        n_u = np.bincount(owner, weights=drawn == U, minlength=size)
        hits += int(((n_l == 0) & (n_u >= 2)).sum())
    return hits


def root_survival_mc(dist: DegreeDistribution, t: int, trials: int, seed=0,
                     method: str = "auto", pool_size: int = POOL_SIZE,
                     max_expected_nodes: float = MAX_EXPECTED_NODES):
    """Monte Carlo estimate of ``P(root labelled U)`` from round-``t`` messages.

    Parameters
    ----------
    method : ``"exact"`` samples full trees of depth ``t + 1``; ``"pool"``
        uses population dynamics; ``"auto"`` picks exact trees while the
        expected total work stays under ``EXACT_WORK_LIMIT`` vertices.

    Returns
    -------
    (estimate, stderr) with the binomial standard error.
    """
    if trials < 1:
        raise BadParameter(f"trials must be >= 1, got {trials}")
    if t < 0:
        raise BadParameter(f"t must be non-negative, got {t}")
    if method == "auto":
        method = "exact" if expected_size(dist, t + 1) * trials <= EXACT_WORK_LIMIT else "pool"
    if method == "exact":
        hits = _survival_exact(dist, t, trials, seed, max_expected_nodes)
    elif method == "pool":
        hits = _survival_pool(dist, t, trials, seed, pool_size)
    else:
        raise BadParameter(f"unknown method {method!r}")
    est = hits / trials
    return est, math.sqrt(est * (1 - est) / trials)
