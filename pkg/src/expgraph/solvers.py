"""Three local algorithms for one column of exp(P).

All of them work against the implicit block linear system whose blocks are the
Taylor terms v_j = P^j e_c / j!; the block matrix itself is never formed.
``gexpm`` relaxes the globally largest residual entry (Gauss-Southwell, indexed
max-heap), ``gexpmq`` drains the residual block by block through a FIFO queue
with a rounding threshold, and ``expmimv`` evaluates the Taylor polynomial by
Horner's rule with incomplete matrix-vector products.
"""

from __future__ import annotations

import heapq
import math
import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graph import CscGraph, SparseVector, assert_stochastic
from .taylor import TaylorParams, queue_thresholds


class IterationCapExceeded(RuntimeError):
    """Safety valve against nontermination on malformed input."""


@dataclass
class SolveReport:
    """Solution plus the work accounting every experiment consumes."""

    x: SparseVector
    final_tracker: float
    steps: int
    edge_touches: int
    effective_matvecs: float
    wallclock: float
    algorithm: str
    taylor_degree: int
    tracker_history: list[float] | None = None
    skipped_mass: float = 0.0
    iterate_nnz: list[int] | None = None


# ---------------------------------------------------------------------------
# gexpm: Gauss-Southwell with an indexed max-heap over residual entries


class ResidualHeapState:
    """Max-heap of residual entries keyed (block j, node i) by magnitude.

    A locator map gives O(log h) insert-or-increase without duplicates. Ties in
    magnitude break toward the smaller (j, i) pair so runs are reproducible.
    The ``tracker`` field carries the psi-weighted residual norm
    sum_j psi_j(1) * ||r_j||_1, updated incrementally at each relaxation.
    """

    def __init__(self, params: TaylorParams, c: int):
        self.params = params
        self._heap: list[tuple[float, int, int]] = [(1.0, 0, c)]
        self._pos: dict[tuple[int, int], int] = {(0, c): 0}
        self._val: dict[tuple[int, int], float] = {(0, c): 1.0}
        self.tracker: float = params.psi[0]

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)

    def items(self):
        """Iterate (j, i, value) over stored residual entries."""
        for (j, i), v in self._val.items():
            yield j, i, v

    def value(self, j: int, i: int) -> float:
        return self._val.get((j, i), 0.0)

    def peek(self) -> tuple[int, int, float]:
        mag, j, i = self._heap[0]
        return j, i, self._val[(j, i)]

    @staticmethod
    def _before(a: tuple[float, int, int], b: tuple[float, int, int]) -> bool:
        # Higher magnitude first; lexicographically smaller (j, i) on ties.
        if a[0] != b[0]:
            return a[0] > b[0]
        return (a[1], a[2]) < (b[1], b[2])

    def _sift_up(self, pos: int) -> None:
        heap, locator = self._heap, self._pos
        entry = heap[pos]
        while pos > 0:
            parent = (pos - 1) >> 1
            if not self._before(entry, heap[parent]):
                break
            heap[pos] = heap[parent]
            locator[(heap[pos][1], heap[pos][2])] = pos
            pos = parent
        heap[pos] = entry
        locator[(entry[1], entry[2])] = pos

    def _sift_down(self, pos: int) -> None:
        heap, locator = self._heap, self._pos
        size = len(heap)
        entry = heap[pos]
        while True:
            child = 2 * pos + 1
            if child >= size:
                break
            right = child + 1
            if right < size and self._before(heap[right], heap[child]):
                child = right
            if not self._before(heap[child], entry):
                break
            heap[pos] = heap[child]
            locator[(heap[pos][1], heap[pos][2])] = pos
            pos = child
        heap[pos] = entry
        locator[(entry[1], entry[2])] = pos

    def add(self, j: int, i: int, delta: float) -> None:
        """Insert the entry or fold delta into its existing value."""
        key = (j, i)
        old = self._val.get(key)
        if old is None:
            self._val[key] = delta
            self._heap.append((abs(delta), j, i))
            self._sift_up(len(self._heap) - 1)
            return
        new = old + delta
        self._val[key] = new
        pos = self._pos[key]
        self._heap[pos] = (abs(new), j, i)
        if abs(new) >= abs(old):
            self._sift_up(pos)
        else:
            self._sift_down(pos)

    def pop_max(self) -> tuple[int, int, float]:
        """Remove and return the largest-magnitude entry as (j, i, value)."""
        if not self._heap:
            raise IndexError("pop from empty residual heap")
        _, j, i = self._heap[0]
        key = (j, i)
        value = self._val.pop(key)
        del self._pos[key]
        last = self._heap.pop()
        if self._heap:
            self._heap[0] = last
            self._pos[(last[1], last[2])] = 0
            self._sift_down(0)
        return j, i, value

    def audit(self) -> float:
        """Verify heap order and locator consistency; return the recomputed
        psi-weighted residual norm. Raises RuntimeError on inconsistency."""
        heap, locator = self._heap, self._pos
        if len(heap) != len(locator) or len(heap) != len(self._val):
            raise RuntimeError("residual heap: container sizes disagree")
        for pos, (mag, j, i) in enumerate(heap):
            if locator.get((j, i)) != pos:
                raise RuntimeError(f"residual heap: locator mismatch at slot {pos}")
            if mag != abs(self._val[(j, i)]):
                raise RuntimeError(f"residual heap: stale magnitude at slot {pos}")
            if pos > 0 and self._before((mag, j, i), heap[(pos - 1) >> 1]):
                raise RuntimeError(f"residual heap: order violated at slot {pos}")
        psi = self.params.psi
        return math.fsum(psi[j] * abs(v) for (j, _), v in self._val.items())


def relax_step(
    state: ResidualHeapState, g: CscGraph, x: SparseVector
) -> tuple[int, int, float, int]:
    """One Gauss-Southwell relaxation on the top residual entry.

    Moves the popped mass m from residual entry (j, i) into x_i, pushes
    m/(j+1) * P e_i into block j+1 when j < N, and adjusts the tracker by
    -psi_j |m| + psi_{j+1} |m|/(j+1). Returns (j, i, m, edges_touched).
    """
    params = state.params
    N, psi = params.N, params.psi
    j, i, m = state.pop_max()
    x[i] = x.get(i, 0.0) + m
    state.tracker -= psi[j] * abs(m)
    touched = 0
    if j < N:
        w = m / (j + 1)
        lo, hi = int(g.col_ptr[i]), int(g.col_ptr[i + 1])
        rows = g.row_idx
        vals = g.val
        add = state.add
        jn = j + 1
        for k in range(lo, hi):
            add(jn, int(rows[k]), w * float(vals[k]))
        state.tracker += psi[jn] * abs(m) / (j + 1)
        touched = hi - lo
    return j, i, m, touched


def gexpm(
    g: CscGraph,
    c: int,
    eps: float,
    *,
    record_trackers: bool = False,
    check_stochastic: bool = True,
    max_steps_factor: int = 100,
    step_cap: int | None = None,
) -> SolveReport:
    """Gauss-Southwell column-exponential solve with 1-norm guarantee eps.

    Half the budget pays for Taylor truncation (degree selection) and half for
    the residual left behind, so ||exp(P) e_c - x||_1 <= eps at termination.
    """
    if not 0 <= c < g.n:
        raise IndexError(f"column {c} out of range for n={g.n}")
    if check_stochastic:
        assert_stochastic(g)
    params = TaylorParams.for_tolerance(eps)
    target = params.residual_target
    state = ResidualHeapState(params, c)
    x: SparseVector = {}
    history: list[float] | None = [] if record_trackers else None
    steps = 0
    edge_touches = 0
    cap = step_cap if step_cap is not None else max(10_000, max_steps_factor * g.nnz)
    t0 = time.perf_counter()
    while state.tracker > target and state:
        if steps >= cap:
            raise IterationCapExceeded(
                f"gexpm exceeded {cap} relaxations without reaching eps={eps}"
            )
        _, _, _, touched = relax_step(state, g, x)
        steps += 1
        edge_touches += touched
        if history is not None:
            history.append(state.tracker)
    wall = time.perf_counter() - t0
    return SolveReport(
        x=x,
        final_tracker=state.tracker,
        steps=steps,
        edge_touches=edge_touches,
        effective_matvecs=edge_touches / g.nnz if g.nnz else 0.0,
        wallclock=wall,
        algorithm="gexpm",
        taylor_degree=params.N,
        tracker_history=history,
    )


# ---------------------------------------------------------------------------
# gexpmq: thresholded queue relaxation


@dataclass
class ResidualQueueState:
    """FIFO residual for the queue solver.

    Entries dequeue in block order; Z holds, per block, the number of live
    residual nonzeros recorded when that block began draining. Entries popped
    below the block threshold keep their value in ``resid`` (and stay counted
    in the tracker); their psi-weighted mass is also tallied in ``skipped``.
    """

    params: TaylorParams
    queue: deque = field(default_factory=deque)
    resid: dict[tuple[int, int], float] = field(default_factory=dict)
    Z: dict[int, int] = field(default_factory=dict)
    tracker: float = 0.0
    skipped: float = 0.0


def gexpmq(
    g: CscGraph,
    c: int,
    eps: float,
    *,
    record_trackers: bool = False,
    check_stochastic: bool = True,
    loose_thresholds: bool = False,
    return_state: bool = False,
) -> SolveReport | tuple[SolveReport, ResidualQueueState]:
    """Queue-driven column-exponential solve with 1-norm guarantee eps.

    Blocks drain in order; an entry popped below theta*eps/(N*psi_j(1)*Z_j) is
    discarded. Termination happens when the tracker falls to theta*eps or the
    queue empties; either way the psi-weighted residual left behind is at most
    theta*eps, so the total error is within eps.
    """
    if not 0 <= c < g.n:
        raise IndexError(f"column {c} out of range for n={g.n}")
    if check_stochastic:
        assert_stochastic(g)
    params = TaylorParams.for_tolerance(eps)
    N, psi = params.N, params.psi
    target = params.residual_target
    bases = queue_thresholds(params, pseudocode_factor_e=loose_thresholds)

    state = ResidualQueueState(params=params)
    state.resid[(0, c)] = 1.0
    state.queue.append(c)
    state.tracker = psi[0]

    x: SparseVector = {}
    history: list[float] | None = [] if record_trackers else None
    steps = 0
    edge_touches = 0
    col_ptr, rows, vals = g.col_ptr, g.row_idx, g.val
    resid, queue = state.resid, state.queue
    t0 = time.perf_counter()
    done = False
    for j in range(N):
        z_j = len(queue)
        if z_j == 0:
            break
        state.Z[j] = z_j
        thresh = bases[j] / z_j
        jn = j + 1
        psi_j = psi[j]
        psi_jn = psi[jn]
        inv = 1.0 / (j + 1)
        last_block = jn == N
        for _ in range(z_j):
            i = queue.popleft()
            rij = resid[(j, i)]
            if rij < thresh:
                state.skipped += psi_j * rij
                continue
            x[i] = x.get(i, 0.0) + rij
            del resid[(j, i)]
            state.tracker -= psi_j * rij
            w = rij * inv
            lo, hi = int(col_ptr[i]), int(col_ptr[i + 1])
            for k in range(lo, hi):
                u = int(rows[k])
                upd = w * float(vals[k])
                if last_block:
                    # Relaxing the would-be block-N entry creates no residual
                    # mass, so its value goes straight into the solution.
                    x[u] = x.get(u, 0.0) + upd
                else:
                    key = (jn, u)
                    old = resid.get(key)
                    if old is None:
                        resid[key] = upd
                        queue.append(u)
                    else:
                        resid[key] = old + upd
                    state.tracker += psi_jn * upd
            steps += 1
            edge_touches += hi - lo
            if history is not None:
                history.append(state.tracker)
            if state.tracker <= target:
                done = True
                break
        if done:
            break
    wall = time.perf_counter() - t0
    report = SolveReport(
        x=x,
        final_tracker=state.tracker,
        steps=steps,
        edge_touches=edge_touches,
        effective_matvecs=edge_touches / g.nnz if g.nnz else 0.0,
        wallclock=wall,
        algorithm="gexpmq",
        taylor_degree=N,
        tracker_history=history,
        skipped_mass=state.skipped,
    )
    if return_state:
        return report, state
    return report


# ---------------------------------------------------------------------------
# expmimv: Horner evaluation with incomplete matrix-vector products


def top_z_filter(v: SparseVector, z: int) -> SparseVector:
    """Keep the z largest-magnitude entries of v; ties keep the smaller node.

    z >= nnz(v) returns a copy unchanged.
    """
    if z < 1:
        raise ValueError(f"z must be >= 1, got {z}")
    if z >= len(v):
        return dict(v)
    kept = heapq.nsmallest(z, v.items(), key=lambda kv: (-abs(kv[1]), kv[0]))
    return dict(kept)


def _top_z_arrays(nodes: np.ndarray, values: np.ndarray, z: int):
    """Array-form of top_z_filter with the identical tie-break rule."""
    if z >= len(nodes):
        return nodes, values
    order = np.lexsort((nodes, -np.abs(values)))[:z]
    return nodes[order], values[order]


def expmimv(g: CscGraph, c: int, N: int, z: int) -> SolveReport:
    """Horner evaluation of the degree-N Taylor column with z-incomplete products.

    Each iterate keeps only its z largest entries before the matvec, bounding
    the work by O(N d z log z) but giving no accuracy guarantee. The nnz of
    every truncated matvec product is recorded in ``iterate_nnz``.
    """
    if not 0 <= c < g.n:
        raise IndexError(f"column {c} out of range for n={g.n}")
    if z < 1:
        raise ValueError(f"z must be >= 1, got {z}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    col_ptr, row_idx, val = g.col_ptr, g.row_idx, g.val
    nodes = np.array([c], dtype=np.int64)
    values = np.array([1.0])
    iterate_nnz: list[int] = []
    edge_touches = 0
    steps = 0
    t0 = time.perf_counter()
    for k in range(N):
        nodes, values = _top_z_arrays(nodes, values, z)
        counts = (col_ptr[nodes + 1] - col_ptr[nodes]).astype(np.int64)
        total = int(counts.sum())
        edge_touches += total
        steps += len(nodes)
        # Gather the retained columns: index ranges col_ptr[i]..col_ptr[i+1].
        idx = np.repeat(col_ptr[nodes] - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
        idx += np.arange(total)
        touched_rows = row_idx[idx]
        contrib = val[idx] * np.repeat(values / (N - k), counts)
        # Aggregate per destination row; work stays proportional to the edges
        # touched rather than to n.
        if total:
            order = np.argsort(touched_rows, kind="stable")
            rs = touched_rows[order]
            starts = np.flatnonzero(np.concatenate(([True], rs[1:] != rs[:-1])))
            nz = rs[starts]
            new_vals = np.add.reduceat(contrib[order], starts)
        else:
            nz = np.empty(0, dtype=np.int64)
            new_vals = np.empty(0)
        iterate_nnz.append(len(nz))
        pos = int(nz.searchsorted(c))
        if pos < len(nz) and nz[pos] == c:
            new_vals[pos] += 1.0
            nodes, values = nz, new_vals
        else:
            nodes = np.insert(nz, pos, c)
            values = np.insert(new_vals, pos, 1.0)
    wall = time.perf_counter() - t0
    x = {int(i): float(v) for i, v in zip(nodes, values) if v != 0.0}
    return SolveReport(
        x=x,
        final_tracker=float("nan"),
        steps=steps,
        edge_touches=edge_touches,
        effective_matvecs=edge_touches / g.nnz if g.nnz else 0.0,
        wallclock=wall,
        algorithm="expmimv",
        taylor_degree=N,
        iterate_nnz=iterate_nnz,
    )
