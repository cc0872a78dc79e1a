"""Bayesian non-negative matrix factorization for overlapping community
detection in weighted graphs, with a planted-partition benchmark harness."""

from .bench import (
    RestartReport,
    SweepReport,
    deterministic_payload,
    ingest_and_score,
    ng_sweep,
    restart_experiment,
)
from .errors import (
    NmfcommError,
    NumericalError,
    ParameterError,
    ParseError,
    UndefinedMetricError,
    ValidationError,
)
from .graph import (
    Graph,
    InteractionMatrix,
    LoadReport,
    NgParams,
    PlantedPartition,
    build_adjacency_matrix,
    build_interaction_matrix,
    generate_ng_graph,
    load_edge_list,
    load_partition,
    solver_input,
    to_edge_list_text,
)
from .kernels import backend_name
from .membership import UNASSIGNED, Membership, compact, entropy_bits, memberships
from .metrics import HardPartition, modularity, nmi
from .nmf import (
    Factorization,
    FitResult,
    SolverConfig,
    active_component_count,
    data_fit_term,
    energy,
    fit,
    initialize,
    poisson_nll,
    reconstruct,
    update_beta,
    update_h,
    update_w,
)

__version__ = "0.1.0"
