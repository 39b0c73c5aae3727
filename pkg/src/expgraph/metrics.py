"""Accuracy and work metrics for the experiment harness."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graph import CscGraph
from .solvers import SolveReport

CSV_HEADER = ["graph", "seed", "algorithm", "param", "metric", "value"]

VectorLike = Mapping[int, float] | np.ndarray


@dataclass(frozen=True)
class PrecisionReport:
    k: int
    precision: float
    excluded: str
    effective_k: int


def _as_items(v: VectorLike) -> list[tuple[int, float]]:
    if isinstance(v, np.ndarray):
        nz = np.flatnonzero(v)
        return [(int(i), float(v[i])) for i in nz]
    return [(int(i), float(x)) for i, x in v.items() if x != 0.0]


def _top_k(v: VectorLike, k: int, exclude: frozenset[int]) -> list[int]:
    items = [(i, x) for i, x in _as_items(v) if i not in exclude]
    items.sort(key=lambda kv: (-kv[1], kv[0]))
    return [i for i, _ in items[:k]]


def precision_at_k(
    approx: VectorLike,
    truth: VectorLike,
    k: int,
    exclude: str = "none",
    g: CscGraph | None = None,
    c: int | None = None,
) -> PrecisionReport:
    """Set precision |S cap T|/|S| of the top-k index sets.

    With ``exclude="seed+neighbors"`` the seed and its out-neighbors are
    removed from both rankings first (they are always large, so including them
    would inflate the score). Ties rank the smaller node index first. When
    fewer than k candidates survive exclusion, the comparison runs at the
    reduced effective k.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    excluded: frozenset[int] = frozenset()
    if exclude == "seed+neighbors":
        if g is None or c is None:
            raise ValueError("seed+neighbors exclusion needs g and c")
        lo, hi = int(g.col_ptr[c]), int(g.col_ptr[c + 1])
        excluded = frozenset({c, *map(int, g.row_idx[lo:hi])})
    elif exclude != "none":
        raise ValueError(f"unknown exclusion policy {exclude!r}")
    s = _top_k(truth, k, excluded)
    effective_k = len(s)
    if effective_k == 0:
        return PrecisionReport(k=k, precision=0.0, excluded=exclude, effective_k=0)
    t = set(_top_k(approx, effective_k, excluded))
    hit = sum(1 for i in s if i in t)
    return PrecisionReport(
        k=k, precision=hit / effective_k, excluded=exclude, effective_k=effective_k
    )


def one_norm_error(approx: VectorLike, truth: VectorLike) -> float:
    """Sum of |approx_i - truth_i| over the union of supports."""
    a = dict(_as_items(approx))
    t = dict(_as_items(truth))
    keys = set(a) | set(t)
    return float(sum(abs(a.get(i, 0.0) - t.get(i, 0.0)) for i in keys))


def nnz_error_curve(truth: VectorLike) -> list[tuple[int, float]]:
    """1-norm error after keeping only the m largest-magnitude entries, m=1..nnz."""
    items = _as_items(truth)
    mags = np.sort(np.abs(np.array([x for _, x in items])))  # ascending
    # Keeping the m largest leaves the nnz-m smallest behind.
    suffix = np.concatenate(([0.0], np.cumsum(mags)))
    nnz = len(mags)
    return [(m, float(suffix[nnz - m])) for m in range(1, nnz + 1)]


def work_accounting(report: SolveReport, g: CscGraph) -> float:
    """Edges explored divided by nnz(P); 1.0 is one full pass over the matrix."""
    if g.nnz == 0:
        return 0.0
    return report.edge_touches / g.nnz


def write_csv(path: str | Path, rows: Iterable[Sequence]) -> None:
    """Emit experiment rows under the fixed (graph, seed, algorithm, param,
    metric, value) schema."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        writer.writerows(rows)


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        return list(reader)
