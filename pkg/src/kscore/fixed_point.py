"""Fixed points of ``zeta``, density evolution and the predicted core size.

``zeta(a) = a + phi_hat(1 - phi_hat(a)) - 1`` has its roots in ``[0, 1]``.
With ``alpha_low`` the smallest and ``alpha_high`` the largest root, the
asymptotic Karp-Sipser core fraction is

    phi(alpha_high) - phi(alpha_low) - (alpha_high - alpha_low) * phi'(alpha_low)

provided ``phi_hat'(alpha_low) * phi_hat'(alpha_high) < 1``.

Message distributions are triples ``(q_L, q_M, q_U)``; one round of Warning
Propagation on the Galton-Watson tree maps them by :func:`upsilon`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .degree_model import DegreeDistribution, phi, phi_hat, phi_hat_prime, phi_prime
from .errors import (
    DegenerateWeights,
    DegenerateZeta,
    InternalError,
    NoRootFound,
    SimplexViolation,
    ValidationError,
)

log = logging.getLogger(__name__)

ZERO_TOL = 1e-12
BISECT_WIDTH = 1e-13
STABILITY_MARGIN = 1e-9
CLAMP_TOL = 1e-9
SIMPLEX_TOL = 1e-9
DEFAULT_GRID = 100_000


@dataclass(frozen=True)
class MessageDistribution:
    q_L: float
    q_M: float
    q_U: float

    def __post_init__(self):
        q = (self.q_L, self.q_M, self.q_U)
        if any(not (-SIMPLEX_TOL <= x <= 1 + SIMPLEX_TOL) for x in q) or abs(sum(q) - 1) > SIMPLEX_TOL:
            raise SimplexViolation(f"not a probability vector: {q}")

    def as_array(self) -> np.ndarray:
        return np.array([self.q_L, self.q_M, self.q_U])

    def l1(self, other: "MessageDistribution") -> float:
        return float(np.abs(self.as_array() - other.as_array()).sum())

    def __iter__(self):
        return iter((self.q_L, self.q_M, self.q_U))


INITIAL = MessageDistribution(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class FixedPointReport:
    alpha_star_low: float
    alpha_star_high: float
    stability_product: float
    stable: bool
    core_fraction: float
    degenerate: bool = False
    all_roots: tuple = ()
    tangent_roots: tuple = ()
    diagnostics: tuple = field(default=())

    @property
    def limit(self) -> MessageDistribution:
        """Density-evolution limit ``(1 - alpha_high, alpha_low, alpha_high - alpha_low)``."""
        lo, hi = self.alpha_star_low, self.alpha_star_high
        return MessageDistribution(1 - hi, lo, hi - lo)


def _flip(dist, alpha):
    # 1 - phi_hat(alpha), guarded against phi_hat(1) rounding above 1
    return np.clip(1 - phi_hat(dist, alpha), 0.0, 1.0)


def zeta(dist: DegreeDistribution, alpha):
    return alpha + phi_hat(dist, _flip(dist, alpha)) - 1


def xi(dist: DegreeDistribution, alpha):
    return 1 - phi_hat(dist, _flip(dist, alpha))


def xi_prime(dist: DegreeDistribution, alpha):
    return phi_hat_prime(dist, alpha) * phi_hat_prime(dist, _flip(dist, alpha))


def _bisect(dist, lo: float, hi: float, f_lo: float) -> float:
    while hi - lo >= BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        f_mid = zeta(dist, mid)
        if f_mid == 0:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan(dist, grid_size):
    """Return ``(crossing_roots, tangent_roots, max_abs_zeta)``."""
    grid = np.linspace(0.0, 1.0, grid_size + 1)
    z = zeta(dist, grid)
    small = np.abs(z) < ZERO_TOL
    sign = np.where(small, 0, np.sign(z)).astype(int)

    crossings, tangents = [], []
    # brackets between neighbouring nonzero grid values
    for i in np.flatnonzero(sign[:-1] * sign[1:] < 0):
        crossings.append(_bisect(dist, grid[i], grid[i + 1], z[i]))
    # runs of (numerically) zero values
    idx = np.flatnonzero(small)
    if len(idx):
        breaks = np.flatnonzero(np.diff(idx) > 1)
        for run in np.split(idx, breaks + 1):
            a, b = run[0], run[-1]
            left = sign[a - 1] if a > 0 else 0
            right = sign[b + 1] if b < grid_size else 0
            best = float(grid[run[np.argmin(np.abs(z[run]))]])
            if left * right < 0:
                crossings.append(_bisect(dist, grid[a - 1], grid[b + 1], z[a - 1]))
            elif a == 0 or b == grid_size:
                # root on the boundary of [0, 1], e.g. alpha = 0 when p_1 = 0
                crossings.append(0.0 if a == 0 else 1.0)
            else:
                tangents.append(best)
    crossings = [float(c) for c in crossings]
    return sorted(crossings), sorted(tangents), float(np.max(np.abs(z)))


def find_roots(dist: DegreeDistribution, grid_size: int = DEFAULT_GRID) -> FixedPointReport:
    """Locate all roots of ``zeta`` on ``[0, 1]`` and evaluate the core prediction.

    Sign changes on a uniform grid are refined by bisection to width below
    ``1e-13``; grid points with ``|zeta| < 1e-12`` that do not separate a
    sign change are kept as tangential roots.  Raises :class:`DegenerateZeta`
    when ``zeta`` vanishes on the whole grid.
    """
    if grid_size < 1000:
        raise ValidationError(f"grid_size must be at least 1000, got {grid_size}")
    crossings, tangents, zmax = _scan(dist, grid_size)
    if zmax < ZERO_TOL:
        raise DegenerateZeta(f"zeta vanishes identically for {dist!r}")
    roots = sorted(crossings + tangents)
    if not roots:
        raise NoRootFound(f"no root of zeta found for {dist!r}")

    lo, hi = roots[0], roots[-1]
    diagnostics = []
    if tangents:
        diagnostics.append(f"tangential roots at {tangents}")
        if lo in tangents or hi in tangents:
            diagnostics.append("extreme root is tangential")
    product = float(phi_hat_prime(dist, lo) * phi_hat_prime(dist, hi))
    stable = product < 1 - STABILITY_MARGIN
    if abs(product - 1) <= STABILITY_MARGIN:
        diagnostics.append("stability product equals 1 within 1e-9; no prediction")
    elif not stable:
        diagnostics.append(f"unstable fixed point (product {product:.6g})")

    value = phi(dist, hi) - phi(dist, lo) - (hi - lo) * phi_prime(dist, lo)
    if -CLAMP_TOL <= value < 0:
        value = 0.0
    elif 1 < value <= 1 + CLAMP_TOL:
        value = 1.0
    elif not 0 <= value <= 1:
        raise InternalError(f"core fraction {value} outside [0, 1]; root finding failed")
    for d in diagnostics:
        log.warning("%s: %s", dist, d)
    return FixedPointReport(
        alpha_star_low=lo,
        alpha_star_high=hi,
        stability_product=product,
        stable=stable,
        core_fraction=float(value),
        degenerate=False,
        all_roots=tuple(roots),
        tangent_roots=tuple(tangents),
        diagnostics=tuple(diagnostics),
    )


def check_duality(dist: DegreeDistribution, report: FixedPointReport) -> float:
    lo, hi = report.alpha_star_low, report.alpha_star_high
    return max(abs(lo - (1 - phi_hat(dist, hi))), abs(hi - (1 - phi_hat(dist, lo))))


def _coerce(delta) -> MessageDistribution:
    if isinstance(delta, MessageDistribution):
        return delta
    return MessageDistribution(*map(float, delta))


def upsilon(dist: DegreeDistribution, delta) -> MessageDistribution:
    """One round of density evolution:
    ``(q_L, q_M, q_U) -> (phi_hat(q_M), 1 - phi_hat(q_M + q_U), phi_hat(q_M + q_U) - phi_hat(q_M))``.
    """
    d = _coerce(delta)
    m = min(max(d.q_M, 0.0), 1.0)
    mu = min(max(d.q_M + d.q_U, 0.0), 1.0)
    # phi_hat(1) may round a hair above 1; keep the output on the simplex
    f_mu = min(phi_hat(dist, mu), 1.0)
    f_m = min(phi_hat(dist, m), f_mu)
    return MessageDistribution(f_m, 1.0 - f_mu, f_mu - f_m)


class DensityEvolution(NamedTuple):
    trajectory: list
    converged_at: int | None

    @property
    def converged(self) -> bool:
        return self.converged_at is not None

    @property
    def limit(self) -> MessageDistribution:
        return self.trajectory[-1]


def density_evolution(dist: DegreeDistribution, t_max: int = 10_000, tol: float = 1e-12,
                      start=INITIAL) -> DensityEvolution:
    """Iterate :func:`upsilon` from ``(0, 0, 1)``.

    Near the limit the update moves ``q_L`` and ``q_M`` on alternate rounds,
    so one small step says little.  The run stops at the first ``t`` where
    the L1 changes of the last two rounds are both below ``tol``;
    ``converged_at`` is ``None`` when ``t_max`` rounds did not get there.
    """
    if t_max < 1 or tol <= 0:
        raise ValidationError("need t_max >= 1 and tol > 0")
    traj = [_coerce(start)]
    prev_change = math.inf
    for t in range(1, t_max + 1):
        nxt = upsilon(dist, traj[-1])
        change = nxt.l1(traj[-1])
        traj.append(nxt)
        if change < tol and prev_change < tol:
            return DensityEvolution(traj, t)
        prev_change = change
    log.warning("density evolution did not converge within %d rounds", t_max)
    return DensityEvolution(traj, None)


def metric_weights(dist: DegreeDistribution, report: FixedPointReport) -> tuple[float, float]:
    a = phi_hat_prime(dist, report.alpha_star_low)
    b = phi_hat_prime(dist, report.alpha_star_high)
    if a <= 0 or b <= 0:
        raise DegenerateWeights(f"phi_hat' vanishes at a root (low {a}, high {b})")
    return (a / b) ** 0.25, (b / a) ** 0.25


def metric_d(dist: DegreeDistribution, report: FixedPointReport, delta1, delta2) -> float:
    """Weighted distance ``w_L |dq_L| + w_M |dq_M|`` with
    ``w_L = (phi_hat'(alpha_low) / phi_hat'(alpha_high)) ** (1/4)`` and
    ``w_M = 1 / w_L``."""
    d1, d2 = _coerce(delta1), _coerce(delta2)
    w_l, w_m = metric_weights(dist, report)
    return w_l * abs(d1.q_L - d2.q_L) + w_m * abs(d1.q_M - d2.q_M)


def contraction_probe(dist: DegreeDistribution, report: FixedPointReport,
                      eps1: float, eps2: float) -> float:
    """Ratio ``D(U(Delta), U(Delta')) / D(Delta, Delta')`` for
    ``Delta' = Delta + (eps1, -eps1 - eps2, eps2)`` around the limit point."""
    if eps1 == 0 and eps2 == 0:
        raise ValidationError("perturbation must be nonzero")
    base = report.limit
    moved = MessageDistribution(base.q_L + eps1, base.q_M - eps1 - eps2, base.q_U + eps2)
    if min(moved) < 0:
        raise SimplexViolation(f"perturbed point leaves the simplex: {tuple(moved)}")
    before = metric_d(dist, report, base, moved)
    after = metric_d(dist, report, upsilon(dist, base), upsilon(dist, moved))
    return after / before


def survival_probability(dist: DegreeDistribution, delta) -> float:
    """Probability that the tree root is labelled U given child messages ~ ``delta``:
    ``phi(q_M + q_U) - phi(q_M) - q_U phi'(q_M)``."""
    d = _coerce(delta)
    m = min(max(d.q_M, 0.0), 1.0)
    mu = min(max(d.q_M + d.q_U, 0.0), 1.0)
    value = phi(dist, mu) - phi(dist, m) - d.q_U * phi_prime(dist, m)
    return float(min(max(value, 0.0), 1.0))


def predicted_core_fraction(dist: DegreeDistribution, grid_size: int = DEFAULT_GRID) -> float:
    """Core fraction if the fixed point is stable, else ``nan``."""
    try:
        report = find_roots(dist, grid_size)
    except DegenerateZeta:
        return math.nan
    return report.core_fraction if report.stable else math.nan


def delta_at(dist: DegreeDistribution, t: int, start=INITIAL) -> MessageDistribution:
    """Exactly ``t`` applications of :func:`upsilon` (no early stop)."""
    if t < 0:
        raise ValidationError(f"t must be non-negative, got {t}")
    d = _coerce(start)
    for _ in range(t):
        d = upsilon(dist, d)
    return d
