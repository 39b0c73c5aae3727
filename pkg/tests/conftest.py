import numpy as np
import pytest

from expgraph import from_edges, normalize_to_stochastic
from expgraph.gen import ForestFireConfig, forest_fire, random_regular


@pytest.fixture
def two_cycle():
    return normalize_to_stochastic(from_edges(2, [0, 1], [1, 0]))


@pytest.fixture
def self_loop():
    return normalize_to_stochastic(from_edges(1, [0], [0]))


@pytest.fixture
def star():
    # Node 0 points at 1, 2, 3 and each leaf points back.
    return from_edges(4, [0, 0, 0, 1, 2, 3], [1, 2, 3, 0, 0, 0])


def random_stochastic(n: int, seed: int, avg_degree: int = 4):
    """Random directed graph with out-degrees in [1, 2*avg_degree], normalized."""
    rng = np.random.default_rng(seed)
    degrees = rng.integers(1, 2 * avg_degree + 1, size=n)
    src = np.repeat(np.arange(n), degrees)
    dst = rng.integers(0, n, size=degrees.sum())
    g = from_edges(n, src, dst)
    return normalize_to_stochastic(g)


def small_test_graphs(count: int = 10, max_n: int = 2000):
    """Mixed forest-fire and random-regular graphs for solver validation."""
    sizes = [20, 30, 50, 80, 120, 200, 320, 500, 1000, max_n]
    graphs = []
    for idx, n in enumerate(sizes[:count]):
        if idx % 2 == 0:
            g = forest_fire(ForestFireConfig(n, 0.4, 100 + idx))
        else:
            g = random_regular(n, min(4, n - 1), 200 + idx)
        graphs.append(normalize_to_stochastic(g))
    return graphs
