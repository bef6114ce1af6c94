"""Distributed least-squares state estimation from noisy relative
measurements on a graph, with spectral selection of the proximal penalty."""

from .estimator import (
    AgentState,
    SchemeConfig,
    Trajectory,
    build_system,
    centralized_solve,
    gauge_align,
    matrix_iterate,
    pp_step,
    regularized_objective,
    run_scheme,
)
from .graph import (
    DisconnectedGraphError,
    EdgeListError,
    Graph,
    TopologySummary,
    diameter,
    from_edge_list,
    gen_binary_tree_plus,
    gen_circulant,
    gen_complete,
    gen_small_world,
    gen_star,
    graph_digest,
    is_bipartite,
    is_connected,
    operators,
    summarize,
    to_edge_list,
)
from .measurement import (
    GroundTruth,
    MeasurementSet,
    aggregate,
    gen_truth,
    measure,
    measurements_to_csv,
)
from .metrics import EffectiveRateUndefined, PerfReport, cost, effective_rate, mse, perf_report
from .spectral import (
    NumericalError,
    RhoPlan,
    Spectrum,
    centroid,
    convergence_rate,
    eig_bounds,
    rho_star,
    spectrum_f,
    spectrum_normalized_laplacian,
    symmetric_eigenvalues,
)

__version__ = "0.1.0"
