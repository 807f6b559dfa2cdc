"""Quasi-stationary hitting-time toolkit for reversible chains on transitive graphs."""

from .bounds import (
    BoundReport,
    Verdict,
    beta_gamma,
    build_report,
    collapsed_chain,
    err_functional,
    killing_integrals,
    verify_ab,
    verify_interlacing,
    verify_killing_identities,
    verify_prop43,
    verify_refined,
)
from .chain import (
    ReversibleChain,
    eigentime_mean_hit,
    heat_kernel,
    spectral_counting,
    srw_chain,
)
from .graphs import (
    Graph,
    MetricProfile,
    build_cayley,
    build_complete,
    build_cycle,
    build_hypercube,
    build_torus,
    load_edge_list,
    metric_profile,
    parse_graph_spec,
)
from .killed import (
    KilledSpectrum,
    QuasiStationaryComponent,
    TargetSet,
    killed_spectrum,
    parse_set_spec,
    quasi_stationary,
    select_max_component,
    target_set,
)
from .laws import (
    HittingLaw,
    hitting_law,
    mean_from_pi,
    mean_sq_hit_profile,
    solve_t_med,
    tail_from_alpha,
    tail_from_pi,
    tail_from_vertex,
)
from .montecarlo import (
    HitSample,
    SimConfig,
    empirical_tail,
    sample_hitting,
    sample_killed_local_time,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "Graph",
    "HitSample",
    "HittingLaw",
    "KilledSpectrum",
    "MetricProfile",
    "QuasiStationaryComponent",
    "ReversibleChain",
    "SimConfig",
    "TargetSet",
    "Verdict",
    "beta_gamma",
    "build_cayley",
    "build_complete",
    "build_cycle",
    "build_hypercube",
    "build_report",
    "build_torus",
    "collapsed_chain",
    "eigentime_mean_hit",
    "empirical_tail",
    "err_functional",
    "heat_kernel",
    "hitting_law",
    "killed_spectrum",
    "killing_integrals",
    "load_edge_list",
    "mean_from_pi",
    "mean_sq_hit_profile",
    "metric_profile",
    "parse_graph_spec",
    "parse_set_spec",
    "quasi_stationary",
    "sample_hitting",
    "sample_killed_local_time",
    "select_max_component",
    "solve_t_med",
    "spectral_counting",
    "srw_chain",
    "tail_from_alpha",
    "tail_from_pi",
    "tail_from_vertex",
    "target_set",
    "verify_ab",
    "verify_interlacing",
    "verify_killing_identities",
    "verify_prop43",
    "verify_refined",
]
