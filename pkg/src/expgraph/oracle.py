"""Slow, trusted reference computations used to validate every solver."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .graph import CscGraph

# Degree giving a truncation error below 1e-15; effectively exact in doubles.
ORACLE_DEGREE = 17

# Dense vectors above this size are refused outright.
NODE_CAP = 10**6

DenseVector = np.ndarray


def to_scipy(g: CscGraph) -> sp.csc_matrix:
    """View a CscGraph as a scipy CSC matrix (shares the underlying arrays)."""
    return sp.csc_matrix((g.val, g.row_idx, g.col_ptr), shape=(g.n, g.n))


def _check_cap(g: CscGraph) -> None:
    if g.n > NODE_CAP:
        raise ValueError(f"graph has {g.n} nodes; dense oracle cap is {NODE_CAP}")


def dense_taylor_oracle(g: CscGraph, c: int, N: int = ORACLE_DEGREE) -> DenseVector:
    """Truncated Taylor series by repeated sparse matvec v_{j+1} = P v_j/(j+1)."""
    _check_cap(g)
    if not 0 <= c < g.n:
        raise IndexError(f"column {c} out of range for n={g.n}")
    P = to_scipy(g)
    v = np.zeros(g.n)
    v[c] = 1.0
    x = v.copy()
    for j in range(N):
        v = P @ v / (j + 1)
        x += v
    return x


def horner_full(g: CscGraph, c: int, N: int = ORACLE_DEGREE) -> DenseVector:
    """Degree-N Taylor column by the untruncated Horner recurrence."""
    _check_cap(g)
    if not 0 <= c < g.n:
        raise IndexError(f"column {c} out of range for n={g.n}")
    P = to_scipy(g)
    e_c = np.zeros(g.n)
    e_c[c] = 1.0
    x = e_c.copy()
    for k in range(N):
        x = P @ (x / (N - k)) + e_c
    return x
