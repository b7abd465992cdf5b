"""Monte Carlo runs: empirical core fractions against the analytic prediction,
parameter sweeps over the leaf/3/51 family, and WP convergence probes.

Every function returns a header tuple and a list of row tuples; use
:func:`write_csv` to serialise them.  Floats are printed with 9 significant
digits, so identical inputs give byte-identical files.

Seeds: trial ``i`` at size ``n`` uses ``mix_seed(master_seed, n, i)``; inside
the trial the degrees, pairing and peel order use ``mix_seed(seed, 0)``,
``mix_seed(seed, 1)`` and ``mix_seed(seed, 2)``.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass, field

import numpy as np

from .degree_model import check_assumptions, leaf351, parse_dist_spec
from .errors import AssumptionViolation, BadParameter, DegenerateZeta, InternalError
from .fixed_point import DEFAULT_GRID, find_roots, predicted_core_fraction
from .graph_gen import configuration_model
from .karp_sipser import peel
from .seeding import mix_seed
from .warning_prop import label_nodes, wp_init, wp_round, wp_run

EXPERIMENT_HEADER = ("n", "trial", "seed", "core_fraction", "analytic_prediction", "abs_gap")
SWEEP_HEADER = ("q", "p", "alpha_low", "alpha_high", "stability_product", "core_fraction")
PROBE_HEADER = ("t", "changed_fraction")


@dataclass
class ExperimentConfig:
    dist_spec: str
    n_values: list
    trials_per_n: int = 10
    master_seed: int = 0
    simple_mode: bool = False
    output_path: str | None = None
    force: bool = False
    grid_size: int = DEFAULT_GRID

    def __post_init__(self):
        if not self.n_values or any(int(n) < 1 for n in self.n_values):
            raise BadParameter("n_values must be a non-empty list of positive sizes")
        if self.trials_per_n < 1:
            raise BadParameter("trials_per_n must be >= 1")


@dataclass
class SweepConfig:
    q_values: list = field(default_factory=lambda: [0.0, 0.001, 0.005])
    p_grid: tuple = (0.0, 1.0, 0.01)
    grid_size: int = DEFAULT_GRID
    family: str = "leaf351"

    def __post_init__(self):
        start, stop, step = self.p_grid
        if step <= 0 or not (0 <= start <= stop <= 1):
            raise BadParameter(f"bad p grid {self.p_grid}: need 0 <= start <= stop <= 1, step > 0")
        if self.family != "leaf351":
            raise BadParameter(f"only the leaf351 family is supported, got {self.family!r}")

    def p_values(self) -> list[float]:
        start, stop, step = self.p_grid
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(count)]


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".9g")
    return "" if x is None else str(x)


def write_csv(header, rows, out=None) -> str:
    """Write rows to ``out`` (path, open stream or ``None`` for a string)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    text = buf.getvalue()
    if out is None:
        return text
    if hasattr(out, "write"):
        out.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return text


def measure_trial(dist, n: int, seed: int, simple: bool = False) -> float:
    """Core fraction of one sampled graph, computed by peeling and by WP.

    The two vertex sets must coincide; a mismatch raises InternalError.
    """
    g = configuration_model(dist, n, seed, simple=simple)
    by_peel = peel(g, order_seed=mix_seed(seed, 2)).core_vertices
    by_wp = label_nodes(g, wp_run(g).state).u_vertices()
    if by_peel != by_wp:
        raise InternalError(f"peel and WP cores differ for n={n}, seed={seed}")
    return len(by_peel) / n


def run_experiment(config: ExperimentConfig):
    """Per-trial rows followed by ``mean`` and ``stdev`` summary rows per n."""
    dist = parse_dist_spec(config.dist_spec)
    report = check_assumptions(dist)
    if not report.ok and not config.force:
        raise AssumptionViolation(
            f"{config.dist_spec}: p1 > 0 is {report.p1_positive}, "
            f"E[D(D-2)] = {report.giant_moment:.6g} (use force to run anyway)"
        )
    prediction = predicted_core_fraction(dist, config.grid_size)
    rows = []
    for n in map(int, config.n_values):
        values = []
        for i in range(config.trials_per_n):
            seed = mix_seed(config.master_seed, n, i)
            frac = measure_trial(dist, n, seed, config.simple_mode)
            values.append(frac)
            rows.append((n, i, seed, frac, prediction, abs(frac - prediction)))
        mean = statistics.fmean(values)
        sd = statistics.stdev(values) if len(values) > 1 else 0.0
        rows.append((n, "mean", None, mean, prediction, abs(mean - prediction)))
        rows.append((n, "stdev", None, sd, None, None))
    if config.output_path:
        write_csv(EXPERIMENT_HEADER, rows, config.output_path)
    return EXPERIMENT_HEADER, rows


def run_sweep(config: SweepConfig):
    rows = []
    for q in config.q_values:
        for p in config.p_values():
            dist = leaf351(float(q), p)
            try:
                r = find_roots(dist, config.grid_size)
            except DegenerateZeta:
                rows.append((float(q), p, math.nan, math.nan, math.nan, math.nan))
                continue
            rows.append((float(q), p, r.alpha_star_low, r.alpha_star_high,
                         r.stability_product, r.core_fraction))
    return SWEEP_HEADER, rows


def convergence_probe(dist, n: int, seed: int, t_list):
    """Fraction of directed messages at round ``t`` that differ from the fixed point."""
    t_list = [int(t) for t in t_list]
    if any(b < a for a, b in zip(t_list, t_list[1:])) or (t_list and t_list[0] < 0):
        raise BadParameter("t_list must be ascending and non-negative")
    g = configuration_model(dist, n, seed)
    final = wp_run(g).state.values
    total = max(len(final), 1)
    rows = []
    state = wp_init(g)
    for t in t_list:
        while state.round < t and not np.array_equal(state.values, final):
            state = wp_round(g, state)
        rows.append((t, np.count_nonzero(state.values != final) / total))
    return PROBE_HEADER, rows
