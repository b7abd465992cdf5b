"""Acceptance criteria, one test per criterion.

Each test records a ``PASS`` or ``FAIL`` line with the measured numbers.
Under pytest the lines are printed in the terminal summary; running this
file directly (``python3 tests/test_acceptance.py``) evaluates every
criterion and prints the same lines.
"""

import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from conftest import MIXED_LAWS, random_multigraphs  # noqa: E402
from kscore.degree_model import leaf351, make_distribution, random_bounded_law, truncated_poisson  # noqa: E402
from kscore.experiment import ExperimentConfig, SweepConfig, run_experiment, run_sweep  # noqa: E402
from kscore.fixed_point import (  # noqa: E402
    check_duality,
    contraction_probe,
    delta_at,
    density_evolution,
    find_roots,
    survival_probability,
    upsilon,
)
from kscore.graph_gen import MultiGraph  # noqa: E402
from kscore.gw_tree import message_frequencies, root_survival_mc  # noqa: E402
from kscore.karp_sipser import full_matching, peel  # noqa: E402
from kscore.warning_prop import survivors_after, wp_core, wp_run  # noqa: E402
from oracles import core_prediction, max_matching_size, zeta_roots  # noqa: E402

RESULTS = {}
REF = "pmf:1=0.1,3=0.9"


def record(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line)
    return ok


def _mean_fraction(spec, n, trials, seed):
    _, rows = run_experiment(ExperimentConfig(spec, [n], trials, seed))
    return next(r[3] for r in rows if r[1] == "mean")


def _stable_laws(count, seed):
    rng = np.random.default_rng(seed)
    laws = []
    while len(laws) < count:
        d = random_bounded_law(rng)
        r = find_roots(d)
        if r.stable:
            laws.append((d, r))
    return laws


def test_criterion_01_core_size_prediction():
    start = time.perf_counter()
    d = make_distribution({1: 0.1, 3: 0.9})
    r = find_roots(d)
    roots = zeta_roots(d.pmf)
    oracle = core_prediction(d.pmf, roots[0], roots[-1])
    analytic_ok = round(r.core_fraction, 6) == round(oracle, 6) and abs(r.core_fraction - oracle) < 5e-7
    mean = _mean_fraction(REF, 100_000, 10, 2024)
    elapsed = time.perf_counter() - start
    ok = analytic_ok and abs(mean - r.core_fraction) <= 0.01 and elapsed < 120
    assert record(1, ok, f"prediction {r.core_fraction:.9f} vs oracle {oracle:.9f}; "
                         f"mean over 10 graphs at n=1e5 {mean:.6f}; {elapsed:.1f}s")


def test_criterion_02_sublinear_core():
    d = truncated_poisson(2, 20)
    r = find_roots(d)
    small = _mean_fraction("poisson:mean=2,cutoff=20", 10_000, 10, 77)
    large = _mean_fraction("poisson:mean=2,cutoff=20", 100_000, 10, 77)
    gap = r.alpha_star_high - r.alpha_star_low
    ok = gap < 1e-6 and r.core_fraction < 1e-4 and large < 0.02 and large < small
    assert record(2, ok, f"root gap {gap:.2e}, prediction {r.core_fraction:.2e}; "
                         f"mean core n=1e4 {small:.2e}, n=1e5 {large:.2e}")


GRAPHS_3 = None


def _criterion3_graphs():
    global GRAPHS_3
    if GRAPHS_3 is None:
        GRAPHS_3 = random_multigraphs(100, 100, seed=303, laws=MIXED_LAWS)
    return GRAPHS_3


def test_criterion_03_wp_matches_peeling():
    bad = 0
    checks = 0
    for i, g in enumerate(_criterion3_graphs()):
        r = peel(g, order_seed=i, record_history=True)
        for t in range(r.rounds + 1):
            checks += 1
            if survivors_after(g, t) != r.survivors(t):
                bad += 1
        if wp_core(g) != r.core_vertices:
            bad += 1
    assert record(3, bad == 0, f"{checks} (graph, t) comparisons on 100 graphs, {bad} mismatches")


def test_criterion_04_core_order_invariance():
    differing = 0
    for i, g in enumerate(random_multigraphs(100, 200, seed=404)):
        cores = {peel(g, order_seed=1000 * i + s).core_vertices for s in range(5)}
        differing += len(cores) > 1
    assert record(4, differing == 0, f"{differing} of 100 graphs gave more than one core over 5 orders")


def test_criterion_05_message_monotonicity_and_rounds():
    non_monotone = too_many_changes = over_edges = 0
    worst = 0.0
    for g in _criterion3_graphs():
        run = wp_run(g, record=True)
        h = np.array(run.history, dtype=int)
        steps = np.diff(h, axis=0)
        non_monotone += int(np.any(steps > 0))
        too_many_changes += int((steps != 0).sum(axis=0).max(initial=0) > 2)
        over_edges += int(run.rounds_to_fix > g.m)
        if g.m:
            worst = max(worst, run.rounds_to_fix / g.m)
    ok = non_monotone == 0 and too_many_changes == 0 and over_edges == 0
    assert record(5, ok, f"non-monotone graphs {non_monotone}, >2 changes {too_many_changes}, "
                         f"rounds > |E| on {over_edges} of 100 graphs (max rounds/|E| {worst:.2f})")


def test_criterion_06_density_evolution():
    worst_limit = worst_resid = 0.0
    monotone = True
    for d, r in _stable_laws(20, 606):
        de = density_evolution(d, t_max=10_000, tol=1e-12)
        traj = np.array([x.as_array() for x in de.trajectory])
        monotone &= bool(np.all(np.diff(traj[:, 0]) >= -1e-14) and np.all(np.diff(traj[:, 1]) >= -1e-14)
                         and np.all(np.diff(traj[:, 2]) <= 1e-14))
        worst_limit = max(worst_limit, de.limit.l1(r.limit) if de.converged else np.inf)
        worst_resid = max(worst_resid, upsilon(d, de.limit).l1(de.limit))
    ok = monotone and worst_limit < 1e-8 and worst_resid < 1e-12
    assert record(6, ok, f"monotone {monotone}, max |limit - roots| {worst_limit:.2e}, "
                         f"max fixed-point residual {worst_resid:.2e}")


def test_criterion_07_duality():
    worst = max(check_duality(d, r) for d, r in _stable_laws(20, 606))
    assert record(7, worst < 1e-9, f"max duality residual over 20 laws {worst:.2e}")


def test_criterion_08_contraction():
    rng = np.random.default_rng(808)
    worst, failures, cases = 0.0, 0, 0
    for d, r in _stable_laws(10, 808):
        base = r.limit
        done = 0
        while done < 100:
            e1, e2 = rng.uniform(-1e-3, 1e-3, size=2)
            if min(base.q_L + e1, base.q_M - e1 - e2, base.q_U + e2) < 0:
                continue
            ratio = contraction_probe(d, r, e1, e2)
            worst = max(worst, ratio)
            failures += ratio >= 1
            done += 1
            cases += 1
    assert record(8, failures == 0, f"{failures} of {cases} perturbations with ratio >= 1 "
                                    f"(max ratio {worst:.3f})")


def test_criterion_09_tree_matchings():
    import networkx as nx

    trees = [MultiGraph.from_edges(1, [])]
    for n in range(2, 13):
        trees += [MultiGraph.from_edges(n, list(t.edges())) for t in nx.nonisomorphic_trees(n)]
    wrong_size = nonempty_core = 0
    for i, g in enumerate(trees):
        m = full_matching(g, order_seed=i, phase2_seed=i)
        wrong_size += len(m.matching) != max_matching_size(g.n, g.edges.tolist())
        nonempty_core += bool(peel(g, order_seed=i).core_vertices)
    ok = wrong_size == 0 and nonempty_core == 0
    assert record(9, ok, f"{len(trees)} trees: {wrong_size} non-maximum matchings, {nonempty_core} non-empty cores")


def test_criterion_10_tree_messages():
    d = make_distribution({1: 0.1, 3: 0.9})
    freqs = message_frequencies(d, [1, 2, 4, 6], 100_000, seed=1010)
    worst_z = 0.0
    for t, (freq, err, _) in freqs.items():
        exact = delta_at(d, t).as_array()
        for f, e, x in zip(freq, err, exact):
            z = abs(f - x) / e if e > 0 else (0.0 if abs(f - x) < 1e-12 else np.inf)
            worst_z = max(worst_z, z)
    est, se = root_survival_mc(d, 20, 100_000, seed=1020)
    exact20 = survival_probability(d, delta_at(d, 20))
    z20 = abs(est - exact20) / se
    ok = worst_z <= 4 and z20 <= 3
    assert record(10, ok, f"max |z| of message frequencies {worst_z:.2f} (limit 4); "
                          f"t=20 survival {est:.4f} vs {exact20:.4f}, |z| {z20:.2f} (limit 3)")


def test_criterion_11_sweep_shape():
    start = time.perf_counter()
    _, rows = run_sweep(SweepConfig(q_values=[0.0, 0.001, 0.005], p_grid=(0.0, 1.0, 0.01)))
    elapsed = time.perf_counter() - start
    col = {q: [r for r in rows if r[0] == q] for q in (0.0, 0.001, 0.005)}
    frac5 = np.array([r[5] for r in col[0.005]])
    drops = frac5[:-1] - frac5[1:]
    biggest = float(np.max(np.abs(drops)))
    where = int(np.argmax(np.abs(drops)))
    flat = all(abs(r[5] - 1.0) <= 1e-12 for r in col[0.0])
    oracle_ok = True
    for r in (col[0.005][3], col[0.005][4], col[0.001][60]):
        d = leaf351(r[0], r[1])
        roots = zeta_roots(d.pmf, grid=2000)
        oracle_ok &= abs(r[2] - roots[0]) < 1e-9 and abs(r[3] - roots[-1]) < 1e-9
    ok = elapsed < 60 and biggest > 0.3 and flat and oracle_ok
    assert record(11, ok, f"{elapsed:.1f}s; q=0.005 largest adjacent change {biggest:.4f} "
                          f"between p={col[0.005][where][1]} and p={col[0.005][where + 1][1]} (needs > 0.3); "
                          f"q=0 all ones {flat}; roots match oracle {oracle_ok}")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    sys.exit(0 if all("PASS" in line for line in RESULTS.values()) else 1)
