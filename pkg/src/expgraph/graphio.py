"""File ingestion and serialization for graphs and solution vectors."""

from __future__ import annotations

import math
from pathlib import Path
from typing import TextIO

import numpy as np

from .graph import CscGraph, SparseVector, from_edges


class ParseError(ValueError):
    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")


def _finite(x: float, path, lineno: int) -> float:
    if not math.isfinite(x):
        raise ParseError(path, lineno, f"non-finite value {x}")
    return x


def read_graph(path: str | Path, format: str = "auto") -> CscGraph:
    """Load a graph as SMAT, MatrixMarket, or a plain edge list.

    ``auto`` dispatches on the file extension (.smat, .mtx); anything else is
    treated as an edge list. All loaders reject out-of-range indices and
    non-finite weights; symmetric MatrixMarket input is expanded to both arcs.
    """
    path = Path(path)
    if format == "auto":
        suffix = path.suffix.lower()
        format = {"": "edgelist", ".smat": "smat", ".mtx": "mtx"}.get(suffix, "edgelist")
    readers = {"smat": _read_smat, "mtx": _read_mtx, "edgelist": _read_edgelist}
    if format not in readers:
        raise ValueError(f"unknown graph format {format!r}")
    with open(path) as fh:
        return readers[format](fh, path)


def _read_smat(fh: TextIO, path) -> CscGraph:
    header = fh.readline().split()
    if len(header) != 3:
        raise ParseError(path, 1, "SMAT header must be 'n n nnz'")
    n, n2, nnz = (int(t) for t in header)
    if n != n2:
        raise ParseError(path, 1, "SMAT matrices must be square")
    src = np.empty(nnz, dtype=np.int64)
    dst = np.empty(nnz, dtype=np.int64)
    wgt = np.empty(nnz, dtype=np.float64)
    k = 0
    for lineno, line in enumerate(fh, start=2):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 3:
            raise ParseError(path, lineno, "expected 'src dst weight'")
        if k >= nnz:
            raise ParseError(path, lineno, f"more than {nnz} edges")
        src[k], dst[k] = int(parts[0]), int(parts[1])
        wgt[k] = _finite(float(parts[2]), path, lineno)
        k += 1
    if k != nnz:
        raise ParseError(path, 1, f"header promised {nnz} edges, found {k}")
    _check_range(src, dst, n, path)
    return from_edges(n, src, dst, wgt)


def _read_mtx(fh: TextIO, path) -> CscGraph:
    first = fh.readline()
    if not first.startswith("%%MatrixMarket"):
        raise ParseError(path, 1, "missing MatrixMarket banner")
    tokens = first.lower().split()
    symmetric = "symmetric" in tokens
    if not ("general" in tokens or symmetric):
        raise ParseError(path, 1, "only general or symmetric matrices supported")
    lineno = 1
    header = None
    for line in fh:
        lineno += 1
        if line.startswith("%"):
            continue
        header = line.split()
        break
    if header is None or len(header) != 3:
        raise ParseError(path, lineno, "size line must be 'rows cols nnz'")
    n, n2, nnz = (int(t) for t in header)
    if n != n2:
        raise ParseError(path, lineno, "matrix must be square")
    src, dst, wgt = [], [], []
    for line in fh:
        lineno += 1
        parts = line.split()
        if not parts:
            continue
        if len(parts) not in (2, 3):
            raise ParseError(path, lineno, "expected 'row col [value]'")
        r, c = int(parts[0]) - 1, int(parts[1]) - 1
        w = _finite(float(parts[2]), path, lineno) if len(parts) == 3 else 1.0
        # MatrixMarket rows are destinations when columns hold out-edges.
        src.append(c)
        dst.append(r)
        wgt.append(w)
        if symmetric and r != c:
            src.append(r)
            dst.append(c)
            wgt.append(w)
    src = np.array(src, dtype=np.int64)
    dst = np.array(dst, dtype=np.int64)
    _check_range(src, dst, n, path)
    return from_edges(n, src, dst, np.array(wgt))


def _read_edgelist(fh: TextIO, path) -> CscGraph:
    src, dst = [], []
    for lineno, line in enumerate(fh, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ParseError(path, lineno, "expected 'src dst'")
        src.append(int(parts[0]))
        dst.append(int(parts[1]))
    src = np.array(src, dtype=np.int64)
    dst = np.array(dst, dtype=np.int64)
    if len(src) == 0:
        raise ParseError(path, 1, "no edges found")
    if src.min() < 0 or dst.min() < 0:
        raise ParseError(path, 1, "negative node id")
    # Compact arbitrary ids to dense 0-based; keep the original labels.
    labels, inverse = np.unique(np.concatenate([src, dst]), return_inverse=True)
    return from_edges(
        len(labels), inverse[: len(src)], inverse[len(src) :], labels=labels
    )


def _check_range(src: np.ndarray, dst: np.ndarray, n: int, path) -> None:
    if len(src) and (
        src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n
    ):
        raise ParseError(path, 1, "node index out of range")


def write_smat(g: CscGraph, path: str | Path) -> None:
    """Write edges column by column; byte-identical output for equal graphs."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.n} {g.nnz}\n")
        for j in range(g.n):
            for k in range(int(g.col_ptr[j]), int(g.col_ptr[j + 1])):
                fh.write(f"{j} {int(g.row_idx[k])} {g.val[k]:.17g}\n")


def write_solution(x: SparseVector, meta: dict[str, str], path: str | Path) -> None:
    """Write (node, value) rows sorted by descending value; 17 significant
    digits make the round trip lossless."""
    with open(path, "w") as fh:
        for key in sorted(meta):
            fh.write(f"# {key}: {meta[key]}\n")
        for node, value in sorted(x.items(), key=lambda kv: (-kv[1], kv[0])):
            if not math.isfinite(value):
                raise ValueError(f"non-finite solution value at node {node}")
            fh.write(f"{node} {value:.17g}\n")


def read_solution(path: str | Path) -> tuple[SparseVector, dict[str, str]]:
    x: SparseVector = {}
    meta: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                meta[key.strip()] = value.strip()
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(path, lineno, "expected 'node value'")
            node = int(parts[0])
            if node in x:
                raise ParseError(path, lineno, f"duplicate node {node}")
            x[node] = _finite(float(parts[1]), path, lineno)
    return x, meta
