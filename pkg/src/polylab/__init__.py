"""Numerical companion to the small-ball argument for random polytopes.

Exact norms of ``L_r = B_inf^n ∩ sqrt(r) B_2^n`` and its polar, block
partitions, LP gauges of ``absconv(X_1, ..., X_N)``, greedy nets, and
seeded Monte Carlo campaigns for each probabilistic step.
"""
from .distributions import (
    DistributionSpec,
    Estimate,
    Law,
    SeededStream,
    estimate_small_ball,
    format_dist,
    parse_dist,
    sample_matrix,
    sample_scalar,
    small_ball_mass,
)
from .errors import (
    ConfigurationError,
    DomainError,
    NetError,
    PolylabError,
    ResourceError,
    SolverError,
)
from .experiments import ExperimentConfig, TailCurve
from .interp_norm import (
    InterpolationIndex,
    dual_gauge_exact,
    holmstedt_approx,
    normalize_to_dual_sphere,
    primal_gauge,
    rearrange_desc,
    water_filling_maximizer,
)
from .nets import Ball, DualSphere, Net, greedy_net, project_to_net
from .partition import BlockPartition, block_l2_sum, round_robin_partition, verify_sandwich
from .polytope import (
    GaugeResult,
    certified_containment,
    count_large_coords,
    crosspolytope_fixture,
    gauge_lp,
    identity_fixture,
    membership,
    support_seminorm,
)
from .report import ExperimentReport

__version__ = "0.1.0"
