import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kscore.degree_model import make_distribution, random_bounded_law  # noqa: E402


@pytest.fixture
def d13():
    return make_distribution({1: 0.1, 3: 0.9})


def bounded_laws(count, seed):
    rng = np.random.default_rng(seed)
    return [random_bounded_law(rng) for _ in range(count)]


MIXED_LAWS = ("pmf:1=0.1,3=0.9", "pmf:1=0.3,2=0.3,4=0.4", "poisson:mean=2,cutoff=8")


def random_multigraphs(count, n_max, seed, laws=MIXED_LAWS):
    """Configuration-model multigraphs of random size cycling through ``laws``."""
    from kscore.degree_model import parse_dist_spec
    from kscore.graph_gen import configuration_model

    dists = [parse_dist_spec(s) for s in laws]
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        dist = dists[len(out) % len(dists)]
        n = int(rng.integers(2, n_max + 1))
        try:
            out.append(configuration_model(dist, n, int(rng.integers(2**62))))
        except Exception:  # parity cannot be fixed for this n; draw again
            continue
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(mod.RESULTS.items()):
        terminalreporter.write_line(line)
