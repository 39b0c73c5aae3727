"""Compressed sparse-column storage for directed graphs and their transition matrices.

Columns hold out-edges: entry (i, j) is nonzero iff the graph has an arc
j -> i, so a column access corresponds to reading the out-links of one node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SparseVector = dict[int, float]


class ZeroOutDegreeError(ValueError):
    """A node with no out-edges makes the transition matrix undefined."""


@dataclass(frozen=True)
class CscGraph:
    """Immutable CSC adjacency matrix with per-column out-degrees.

    ``labels`` optionally maps the dense 0-based ids back to the ids found in
    the input file; it plays no role in any computation.
    """

    n: int
    col_ptr: np.ndarray
    row_idx: np.ndarray
    val: np.ndarray
    labels: np.ndarray | None = None
    out_degree: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "out_degree", np.diff(self.col_ptr))
        for arr in (self.col_ptr, self.row_idx, self.val):
            arr.setflags(write=False)

    @property
    def nnz(self) -> int:
        return len(self.row_idx)

    def validate(self) -> None:
        """Check the structural invariants; raise ValueError on violation."""
        if self.col_ptr.shape != (self.n + 1,):
            raise ValueError("col_ptr must have length n+1")
        if self.col_ptr[0] != 0 or self.col_ptr[-1] != len(self.row_idx):
            raise ValueError("col_ptr endpoints do not match nnz")
        if np.any(np.diff(self.col_ptr) < 0):
            raise ValueError("col_ptr must be nondecreasing")
        if len(self.row_idx) and (
            self.row_idx.min() < 0 or self.row_idx.max() >= self.n
        ):
            raise ValueError("row index out of range")
        if not np.all(np.isfinite(self.val)):
            raise ValueError("non-finite edge value")


def from_edges(
    n: int,
    src: np.ndarray,
    dst: np.ndarray,
    weights: np.ndarray | None = None,
    labels: np.ndarray | None = None,
) -> CscGraph:
    """Build a CscGraph from parallel src/dst arrays.

    Duplicate arcs are collapsed with their weights summed. Unweighted input
    gets unit weights.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if weights is None:
        weights = np.ones(len(src), dtype=np.float64)
    else:
        weights = np.asarray(weights, dtype=np.float64)
    if len(src) != len(dst) or len(src) != len(weights):
        raise ValueError("src, dst, and weights must have equal length")
    if len(src) and (src.min() < 0 or src.max() >= n or dst.min() < 0 or dst.max() >= n):
        raise ValueError("edge endpoint out of range")

    order = np.lexsort((dst, src))
    src, dst, weights = src[order], dst[order], weights[order]
    if len(src):
        new_pair = np.empty(len(src), dtype=bool)
        new_pair[0] = True
        new_pair[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
        starts = np.flatnonzero(new_pair)
        val = np.add.reduceat(weights, starts)
        src, dst = src[starts], dst[starts]
    else:
        val = weights

    col_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=col_ptr[1:])
    g = CscGraph(n=n, col_ptr=col_ptr, row_idx=dst, val=val, labels=labels)
    g.validate()
    return g


def normalize_to_stochastic(g: CscGraph) -> CscGraph:
    """Divide each column by its weight sum so that P = G D^{-1}.

    Every node must have out-degree at least one; the first offending node is
    named in the error otherwise.
    """
    isolated = np.flatnonzero(g.out_degree == 0)
    if len(isolated):
        raise ZeroOutDegreeError(f"node {int(isolated[0])} has out-degree 0")
    col_of = np.repeat(np.arange(g.n), g.out_degree)
    col_sums = np.add.reduceat(g.val, g.col_ptr[:-1])
    val = g.val / col_sums[col_of]
    return CscGraph(
        n=g.n, col_ptr=g.col_ptr, row_idx=g.row_idx, val=val, labels=g.labels
    )


def assert_stochastic(g: CscGraph, tol: float = 1e-10) -> None:
    """Raise if any nonempty column sum deviates from 1 by more than tol."""
    nonempty = g.out_degree > 0
    sums = np.add.reduceat(g.val, g.col_ptr[:-1])
    bad = np.flatnonzero(nonempty & (np.abs(sums - 1.0) > tol))
    if len(bad):
        raise ValueError(
            f"column {int(bad[0])} sums to {sums[bad[0]]:.6g}; matrix is not "
            "column-stochastic (did you call normalize_to_stochastic?)"
        )


def column(g: CscGraph, i: int) -> list[tuple[int, float]]:
    """Nonzeros of column i, i.e. the out-links of node i, in row order."""
    if not 0 <= i < g.n:
        raise IndexError(f"column index {i} out of range for n={g.n}")
    lo, hi = int(g.col_ptr[i]), int(g.col_ptr[i + 1])
    return [(int(r), float(v)) for r, v in zip(g.row_idx[lo:hi], g.val[lo:hi])]


@dataclass(frozen=True)
class DegreeStats:
    d_max: int
    d_min: int
    edge_density: float


def degree_stats(g: CscGraph) -> DegreeStats:
    if g.n == 0:
        raise ValueError("empty graph")
    return DegreeStats(
        d_max=int(g.out_degree.max()),
        d_min=int(g.out_degree.min()),
        edge_density=g.nnz / g.n,
    )


def laplacian_column_from_exp_column(
    x: SparseVector, degrees: np.ndarray, c: int
) -> SparseVector:
    """Convert a column of exp(P) into the same column of exp(-L_hat).

    Uses the full similarity transform: entry i of the normalized-Laplacian
    exponential column equals e^{-1} * sqrt(d_c) * d_i^{-1/2} * x_i.
    """
    if degrees[c] < 1:
        raise ValueError(f"seed node {c} has degree < 1")
    scale = math.exp(-1.0) * math.sqrt(float(degrees[c]))
    out: SparseVector = {}
    for i, v in x.items():
        d_i = float(degrees[i])
        if d_i < 1:
            raise ValueError(f"node {i} has degree < 1")
        out[i] = scale * v / math.sqrt(d_i)
    return out
