"""``ks-core`` command line.

Every subcommand writes CSV (header row first) to ``--out`` or stdout.
Exit status is 0 on success, 2 for invalid input and 1 when an internal
consistency check fails.
"""

from __future__ import annotations

import argparse
import math
import sys

from .degree_model import parse_dist_spec
from .errors import InternalError, ValidationError
from .experiment import (
    ExperimentConfig,
    SweepConfig,
    convergence_probe,
    run_experiment,
    run_sweep,
    write_csv,
)
from .fixed_point import DEFAULT_GRID, delta_at, find_roots, survival_probability
from .graph_gen import configuration_model
from .gw_tree import root_survival_mc
from .karp_sipser import peel
from .warning_prop import label_nodes, message_histogram, wp_init, wp_round


def _int_list(text):
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _count(text):
    return int(float(text))  # accepts 1e5


def cmd_solve(args):
    r = find_roots(parse_dist_spec(args.dist), args.grid)
    header = ("alpha_low", "alpha_high", "stability_product", "stable", "core_fraction", "degenerate")
    row = (r.alpha_star_low, r.alpha_star_high, r.stability_product, r.stable,
           r.core_fraction, r.degenerate)
    return header, [row]


def cmd_peel(args):
    g = configuration_model(parse_dist_spec(args.dist), args.n, args.seed, simple=args.simple)
    res = peel(g, order_seed=args.seed)
    size = len(res.core_vertices)
    header = ("n", "core_size", "core_fraction", "rounds", "phase1_matching_size")
    return header, [(g.n, size, size / g.n, res.rounds, len(res.matching))]


def cmd_wp(args):
    g = configuration_model(parse_dist_spec(args.dist), args.n, args.seed, simple=args.simple)
    header = ("t", "frac_L", "frac_M", "frac_U", "changed_count", "core_fraction")
    state = wp_init(g)
    rows = []
    changed = 0
    while True:
        if g.m:
            hist = message_histogram(state)
        else:
            hist = (math.nan, math.nan, math.nan)
        rows.append([state.round, *hist, changed, None])
        nxt = wp_round(g, state)
        changed = int((nxt.values != state.values).sum())
        if changed == 0:
            break
        if nxt.round > 2 * g.m:
            raise InternalError(f"no fixed point after {nxt.round} rounds")
        state = nxt
    rows[-1][-1] = len(label_nodes(g, state).u_vertices()) / g.n
    if not args.trace:
        rows = rows[-1:]
    return header, [tuple(r) for r in rows]


def cmd_gw(args):
    dist = parse_dist_spec(args.dist)
    est, err = root_survival_mc(dist, args.t, args.trials, args.seed)
    exact = survival_probability(dist, delta_at(dist, args.t))
    if err > 0:
        z = (est - exact) / err
    else:
        z = 0.0 if math.isclose(est, exact, abs_tol=1e-12) else math.copysign(math.inf, est - exact)
    return ("t", "mc_estimate", "stderr", "analytic_value", "z_score"), [(args.t, est, err, exact, z)]


def cmd_experiment(args):
    config = ExperimentConfig(
        dist_spec=args.dist,
        n_values=args.n,
        trials_per_n=args.trials,
        master_seed=args.seed,
        simple_mode=args.simple,
        force=args.force,
        grid_size=args.grid,
    )
    return run_experiment(config)


def cmd_sweep(args):
    config = SweepConfig(q_values=args.q, p_grid=(args.p_start, args.p_stop, args.p_step),
                         grid_size=args.grid)
    return run_sweep(config)


def cmd_probe(args):
    return convergence_probe(parse_dist_spec(args.dist), args.n, args.seed, args.t)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ks-core", description="Karp-Sipser core sizes: prediction and simulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write CSV here instead of stdout")

    def add(name, func, help, dist=True):
        p = sub.add_parser(name, parents=[common], help=help)
        if dist:
            p.add_argument("--dist", required=True,
                           help="e.g. pmf:1=0.1,3=0.9 | leaf351:q=0.005,p=0.5 | poisson:mean=2,cutoff=20")
        p.set_defaults(func=func)
        return p

    p = add("solve", cmd_solve, "roots of zeta and the predicted core fraction")
    p.add_argument("--grid", type=_count, default=DEFAULT_GRID)

    p = add("peel", cmd_peel, "leaf removal on one sampled graph")
    p.add_argument("--n", type=_count, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--simple", action="store_true", help="erase loops and parallel edges")

    p = add("wp", cmd_wp, "Warning Propagation on one sampled graph")
    p.add_argument("--n", type=_count, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--simple", action="store_true")
    p.add_argument("--trace", action="store_true", help="print every round, not just the last")

    p = add("gw", cmd_gw, "root survival on Galton-Watson trees")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--trials", type=_count, default=100_000)
    p.add_argument("--seed", type=int, default=0)

    p = add("experiment", cmd_experiment, "empirical core fractions against the prediction")
    p.add_argument("--n", type=_int_list, required=True, help="comma-separated sizes")
    p.add_argument("--trials", type=_count, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--simple", action="store_true")
    p.add_argument("--force", action="store_true", help="run even if the law fails the assumptions")
    p.add_argument("--grid", type=_count, default=DEFAULT_GRID)

    p = add("sweep", cmd_sweep, "roots and core fraction over the leaf351 family", dist=False)
    p.add_argument("--q", type=_float_list, default=[0.0, 0.001, 0.005])
    p.add_argument("--p-start", type=float, default=0.0)
    p.add_argument("--p-stop", type=float, default=1.0)
    p.add_argument("--p-step", type=float, default=0.01)
    p.add_argument("--grid", type=_count, default=DEFAULT_GRID)

    p = add("probe", cmd_probe, "fraction of WP messages not yet at the fixed point")
    p.add_argument("--n", type=_count, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t", type=_int_list, default=[0, 1, 2, 5, 10, 20, 50])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        header, rows = args.func(args)
        write_csv(header, rows, args.out or sys.stdout)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InternalError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
