"""Bounded-support degree distributions and their generating functions.

A :class:`DegreeDistribution` stores the probability mass function
``pmf[k] = P(D = k)`` for ``k = 0..k_max``.  From it we derive

* the degree generating function ``phi(a) = sum_k p_k a^k``,
* the size-biased (edge-biased) offspring law ``p_hat[k-1] = k p_k / lam``
  with ``lam = phi'(1)`` the mean degree, and its generating function
  ``phi_hat(a) = phi'(a) / phi'(1)``.

All evaluations are Horner schemes over the finite coefficient vector and
accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BadParameter,
    DistSpecError,
    DomainError,
    EmptySupport,
    NegativeProbability,
    ParityUnfixable,
    SumNotOne,
)

NORMALIZATION_TOL = 1e-9
PARITY_ATTEMPTS = 1000


@dataclass(frozen=True, eq=False)
class DegreeDistribution:
    """Probability mass function over degrees ``0..k_max``."""

    pmf: np.ndarray
    name: str = field(default="pmf", compare=False)

    def __post_init__(self):
        pmf = np.array(self.pmf, dtype=float)
        pmf.setflags(write=False)
        object.__setattr__(self, "pmf", pmf)

    @property
    def k_max(self) -> int:
        return len(self.pmf) - 1

    @property
    def support(self) -> list[int]:
        return [int(k) for k in np.flatnonzero(self.pmf)]

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.pmf)), self.pmf))

    def size_biased(self) -> "SizeBiasedDistribution":
        return size_biased(self)

    def __eq__(self, other):
        return isinstance(other, DegreeDistribution) and np.array_equal(self.pmf, other.pmf)

    def __hash__(self):
        return hash(self.pmf.tobytes())

    def __repr__(self):
        atoms = ", ".join(f"{k}: {self.pmf[k]:.6g}" for k in self.support)
        return f"DegreeDistribution({{{atoms}}})"


@dataclass(frozen=True)
class SizeBiasedDistribution:
    """Offspring law of a non-root tree vertex; ``pmf[j] = P(D_hat = j)``."""

    pmf: np.ndarray

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.pmf)), self.pmf))


@dataclass(frozen=True)
class AssumptionReport:
    p1_positive: bool
    giant_condition: bool
    giant_moment: float

    @property
    def ok(self) -> bool:
        return self.p1_positive and self.giant_condition


def make_distribution(entries, name: str = "pmf") -> DegreeDistribution:
    """Build a distribution from ``(degree, probability)`` pairs or a mapping.

    A total within ``1e-9`` of one is renormalized; anything further off is
    rejected with :class:`SumNotOne`.
    """
    if isinstance(entries, Mapping):
        entries = list(entries.items())
    entries = [(int(k), float(p)) for k, p in entries]
    if not entries:
        raise EmptySupport("degree distribution needs at least one atom")
    degrees = [k for k, _ in entries]
    if len(set(degrees)) != len(degrees):
        raise BadParameter(f"repeated degree in {degrees}")
    if min(degrees) < 0:
        raise BadParameter(f"negative degree in {degrees}")
    for k, p in entries:
        if p < 0 or math.isnan(p):
            raise NegativeProbability(f"P(D={k}) = {p}")
    total = math.fsum(p for _, p in entries)
    if total == 0:
        raise EmptySupport("all probabilities are zero")
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise SumNotOne(f"probabilities sum to {total!r}")

    k_max = max(k for k, p in entries if p > 0)
    pmf = np.zeros(k_max + 1)
    for k, p in entries:
        if k <= k_max:
            pmf[k] = p
    pmf /= total
    if np.dot(np.arange(k_max + 1), pmf) <= 0:
        raise BadParameter("mean degree must be positive")
    return DegreeDistribution(pmf, name=name)


def _check_unit(alpha):
    a = np.asarray(alpha, dtype=float)
    if np.any(~((a >= 0.0) & (a <= 1.0))):
        raise DomainError(f"argument outside [0, 1]: {alpha!r}")
    return a


def _horner(coeffs: np.ndarray, a):
    # coeffs[j] multiplies a**j
    out = np.zeros_like(a) + coeffs[-1]
    for c in coeffs[-2::-1]:
        out = out * a + c
    return out


def _as_result(value, alpha):
    return float(value) if np.ndim(alpha) == 0 else value


def _derivative_coeffs(coeffs: np.ndarray) -> np.ndarray:
    if len(coeffs) == 1:
        return np.zeros(1)
    return coeffs[1:] * np.arange(1, len(coeffs))


def phi(dist: DegreeDistribution, alpha):
    """Degree generating function ``sum_k p_k alpha^k`` on ``[0, 1]``."""
    a = _check_unit(alpha)
    return _as_result(_horner(dist.pmf, a), alpha)


def phi_prime(dist: DegreeDistribution, alpha):
    a = _check_unit(alpha)
    return _as_result(_horner(_derivative_coeffs(dist.pmf), a), alpha)


def phi_hat(dist: DegreeDistribution, alpha):
    """Generating function of the size-biased offspring law, ``phi'/phi'(1)``."""
    a = _check_unit(alpha)
    return _as_result(_horner(_hat_coeffs(dist), a), alpha)


def phi_hat_prime(dist: DegreeDistribution, alpha):
    a = _check_unit(alpha)
    return _as_result(_horner(_derivative_coeffs(_hat_coeffs(dist)), a), alpha)


def _hat_coeffs(dist: DegreeDistribution) -> np.ndarray:
    return size_biased(dist).pmf


def size_biased(dist: DegreeDistribution) -> SizeBiasedDistribution:
    d = _derivative_coeffs(dist.pmf)
    return SizeBiasedDistribution(d / d.sum())


def check_assumptions(dist: DegreeDistribution) -> AssumptionReport:
    k = np.arange(len(dist.pmf))
    moment = float(np.dot(k * (k - 2), dist.pmf))
    p1 = dist.pmf[1] if dist.k_max >= 1 else 0.0
    return AssumptionReport(
        p1_positive=bool(p1 > 0),
        giant_condition=bool(moment > 0),
        giant_moment=moment,
    )


def sample_degree_sequence(dist: DegreeDistribution, n: int, seed) -> np.ndarray:
    """Draw ``n`` i.i.d. degrees with an even total.

    If the total comes out odd, the last entry is redrawn (at most 1000
    times) until it is even.
    """
    if n < 1:
        raise BadParameter(f"n must be positive, got {n}")
    support = dist.support
    if all(k % 2 == 1 for k in support) and n % 2 == 1:
        raise ParityUnfixable(f"{n} odd degrees always have an odd total")
    rng = np.random.default_rng(seed)
    degrees = rng.choice(len(dist.pmf), size=n, p=dist.pmf)
    head = int(degrees[:-1].sum())
    for _ in range(PARITY_ATTEMPTS):
        if (head + int(degrees[-1])) % 2 == 0:
            return degrees.astype(np.int64)
        degrees[-1] = rng.choice(len(dist.pmf), p=dist.pmf)
    raise ParityUnfixable(f"no even total after {PARITY_ATTEMPTS} redraws")


def leaf351(q: float, p: float) -> DegreeDistribution:
    """Degrees 1, 3, 51 with ``phi_hat(a) = q + (1-q)(p a^2 + (1-p) a^50)``."""
    if not (0 <= q <= 1 and 0 <= p <= 1):
        raise BadParameter(f"leaf351 needs q, p in [0, 1], got q={q}, p={p}")
    z = q + (1 - q) * (p / 3 + (1 - p) / 51)
    entries = [
        (1, q / z),
        (3, (1 - q) * p / (3 * z)),
        (51, (1 - q) * (1 - p) / (51 * z)),
    ]
    return make_distribution(entries, name=f"leaf351:q={q},p={p}")


def truncated_poisson(mean: float, cutoff: int) -> DegreeDistribution:
    if mean <= 0 or cutoff < 1:
        raise BadParameter(f"poisson needs mean > 0 and cutoff >= 1")
    k = np.arange(cutoff + 1)
    logp = k * math.log(mean) - mean - np.array([math.lgamma(j + 1) for j in k])
    pmf = np.exp(logp)
    pmf /= pmf.sum()
    return make_distribution(list(enumerate(pmf)), name=f"poisson:mean={mean},cutoff={cutoff}")


def named_family(name: str, **params) -> DegreeDistribution:
    if name == "leaf351":
        return leaf351(float(params["q"]), float(params["p"]))
    if name == "poisson":
        return truncated_poisson(float(params["mean"]), int(params.get("cutoff", 20)))
    raise BadParameter(f"unknown family {name!r}")


_FAMILY_KEYS = {"leaf351": {"q", "p"}, "poisson": {"mean", "cutoff"}}
_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def parse_dist_spec(spec: str) -> DegreeDistribution:
    """Parse ``pmf:1=0.1,3=0.9``, ``leaf351:q=0.005,p=0.5`` or
    ``poisson:mean=2,cutoff=20``."""
    kind, sep, body = spec.partition(":")
    kind = kind.strip()
    if not sep:
        raise DistSpecError(f"missing ':' in distribution spec {spec!r}")
    if kind not in ("pmf", *_FAMILY_KEYS):
        raise DistSpecError(f"unknown distribution kind {kind!r}")
    pairs = []
    for token in body.split(","):
        key, eq, value = token.partition("=")
        key, value = key.strip(), value.strip()
        if not eq or not key or not _NUMBER.match(value):
            raise DistSpecError(f"bad token {token!r} in {spec!r}")
        pairs.append((key, value))
    if kind == "pmf":
        try:
            entries = [(int(k), float(v)) for k, v in pairs]
        except ValueError:
            bad = next(k for k, _ in pairs if not k.isdigit())
            raise DistSpecError(f"bad token {bad!r}: degree must be an integer") from None
        return make_distribution(entries, name=spec)
    params = dict(pairs)
    unknown = set(params) - _FAMILY_KEYS[kind]
    if unknown:
        raise DistSpecError(f"bad token {sorted(unknown)[0]!r} for family {kind}")
    missing = _FAMILY_KEYS[kind] - set(params) - {"cutoff"}
    if missing:
        raise DistSpecError(f"family {kind} needs {sorted(missing)}")
    return named_family(kind, **params)


def random_bounded_law(rng: np.random.Generator, k_max: int = 8, p1_min: float = 0.02) -> DegreeDistribution:
    """Random pmf on a random subset of ``1..k_max`` that always contains 1."""
    ks = [1] + [k for k in range(2, k_max + 1) if rng.random() < 0.5]
    if len(ks) == 1:
        ks.append(int(rng.integers(3, k_max + 1)))
    w = rng.dirichlet(np.ones(len(ks)))
    w[0] = max(w[0], p1_min)
    w /= w.sum()
    return make_distribution(list(zip(ks, w)))
