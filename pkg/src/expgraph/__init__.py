"""Local algorithms for single columns of exp(P) on sparse graphs."""

from .graph import (
    CscGraph,
    DegreeStats,
    SparseVector,
    column,
    degree_stats,
    from_edges,
    laplacian_column_from_exp_column,
    normalize_to_stochastic,
)
from .oracle import dense_taylor_oracle, horner_full
from .solvers import SolveReport, expmimv, gexpm, gexpmq, top_z_filter
from .taylor import (
    TaylorParams,
    psi_weights,
    queue_thresholds,
    select_degree_bound,
    select_degree_exact,
)

__all__ = [
    "CscGraph",
    "DegreeStats",
    "SolveReport",
    "SparseVector",
    "TaylorParams",
    "column",
    "degree_stats",
    "dense_taylor_oracle",
    "expmimv",
    "from_edges",
    "gexpm",
    "gexpmq",
    "horner_full",
    "laplacian_column_from_exp_column",
    "normalize_to_stochastic",
    "psi_weights",
    "queue_thresholds",
    "select_degree_bound",
    "select_degree_exact",
    "top_z_filter",
]

__version__ = "0.1.0"
