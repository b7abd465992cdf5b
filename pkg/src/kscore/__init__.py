"""Predict and measure the Karp-Sipser core of configuration-model graphs."""

from .degree_model import (
    DegreeDistribution,
    check_assumptions,
    leaf351,
    make_distribution,
    parse_dist_spec,
    phi,
    phi_hat,
    phi_hat_prime,
    phi_prime,
    sample_degree_sequence,
    size_biased,
    truncated_poisson,
)
from .errors import InternalError, KSCoreError, ValidationError
from .fixed_point import (
    FixedPointReport,
    MessageDistribution,
    check_duality,
    contraction_probe,
    delta_at,
    density_evolution,
    find_roots,
    metric_d,
    survival_probability,
    upsilon,
    zeta,
)
from .graph_gen import MultiGraph, configuration_model, erase_to_simple, pair_half_edges
from .gw_tree import GWTree, root_survival_mc, sample_tree, wp_on_tree
from .karp_sipser import core_fraction, full_matching, peel
from .warning_prop import label_nodes, wp_core, wp_round, wp_run

__version__ = "0.1.0"
