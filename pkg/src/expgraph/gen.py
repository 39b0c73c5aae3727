"""Synthetic graph generation for the scaling experiments."""

from __future__ import annotations

import math
import random
from array import array
from dataclasses import dataclass

import numpy as np

from .graph import CscGraph, from_edges


@dataclass(frozen=True)
class ForestFireConfig:
    n_target: int
    p_burn: float
    rng_seed: int


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    d_max: int
    d_min: int


def forest_fire(config: ForestFireConfig) -> CscGraph:
    """Symmetric forest-fire generator with a single burning probability.

    Each arriving node links to a uniformly random ambassador, then fire
    spreads: every burned node ignites a Geometric-distributed number (mean
    p/(1-p)) of its not-yet-burned neighbors, each node burning at most once
    per arrival. The new node links to every burned node; edges are stored as
    both directed arcs. Deterministic given rng_seed.
    """
    n = config.n_target
    p = config.p_burn
    if n < 2:
        raise ValueError(f"n_target must be >= 2, got {n}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p_burn must be in (0, 1), got {p}")
    rng = random.Random(config.rng_seed)
    log_p = math.log(p)

    adj: list[list[int]] = [[] for _ in range(n)]
    src = array("q")
    dst = array("q")

    def add_edge(a: int, b: int) -> None:
        adj[a].append(b)
        adj[b].append(a)
        src.append(a)
        dst.append(b)
        src.append(b)
        dst.append(a)

    add_edge(1, 0)
    for v in range(2, n):
        ambassador = rng.randrange(v)
        burned = {ambassador}
        frontier = [ambassador]
        links = [ambassador]
        while frontier:
            w = frontier.pop()
            # Geometric number of failures before success at rate 1-p.
            count = int(math.log(1.0 - rng.random()) / log_p)
            if count == 0:
                continue
            candidates = [u for u in adj[w] if u not in burned]
            if count < len(candidates):
                candidates = rng.sample(candidates, count)
            for u in candidates:
                burned.add(u)
                frontier.append(u)
                links.append(u)
        for u in links:
            add_edge(v, u)

    return from_edges(
        n, np.frombuffer(src, dtype=np.int64), np.frombuffer(dst, dtype=np.int64)
    )


def random_regular(n: int, d: int, rng_seed: int) -> CscGraph:
    """Directed graph where every node has exactly d distinct out-neighbors.

    Utility generator for solver stress tests; out-degrees are uniform so the
    transition matrix has constant column values 1/d.
    """
    if d < 1 or d >= n:
        raise ValueError(f"need 1 <= d < n, got d={d}, n={n}")
    rng = np.random.default_rng(rng_seed)
    src = np.repeat(np.arange(n, dtype=np.int64), d)
    dst = np.empty(n * d, dtype=np.int64)
    for i in range(n):
        picks = rng.choice(n - 1, size=d, replace=False)
        picks[picks >= i] += 1  # skip self-loops
        dst[i * d : (i + 1) * d] = picks
    return from_edges(n, src, dst)


def power_law_check(g: CscGraph, max_ranks: int = 10**4) -> PowerLawFit:
    """Least-squares log-log slope of the sorted degree sequence.

    Diagnostic only: returns the fitted decay exponent together with the max
    and min out-degrees.
    """
    degrees = np.sort(g.out_degree)[::-1]
    m = min(len(degrees), max_ranks)
    ranks = np.arange(1, m + 1, dtype=np.float64)
    slope = np.polyfit(np.log(ranks), np.log(degrees[:m].astype(np.float64)), 1)[0]
    return PowerLawFit(
        exponent=float(-slope),
        d_max=int(degrees[0]),
        d_min=int(degrees[-1]),
    )
