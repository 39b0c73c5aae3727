import math

import numpy as np
import pytest

from expgraph.oracle import NODE_CAP, dense_taylor_oracle, horner_full
from expgraph.graph import CscGraph

from conftest import random_stochastic


class TestDenseTaylorOracle:
    def test_self_loop_gives_e(self, self_loop):
        out = dense_taylor_oracle(self_loop, 0, N=17)
        assert out[0] == pytest.approx(2.718281828459045, abs=1e-15)

    def test_two_cycle_hyperbolic(self, two_cycle):
        out = dense_taylor_oracle(two_cycle, 0, N=17)
        assert out[0] == pytest.approx(math.cosh(1.0), abs=1e-10)
        assert out[1] == pytest.approx(math.sinh(1.0), abs=1e-10)

    def test_column_sum_is_scalar_taylor(self):
        p = random_stochastic(60, seed=5)
        for N in (3, 9, 17):
            out = dense_taylor_oracle(p, 7, N=N)
            t_n = math.fsum(1 / math.factorial(l) for l in range(N + 1))
            assert out.sum() == pytest.approx(t_n, abs=1e-12)

    def test_tail_bounded_by_remainder(self):
        p = random_stochastic(40, seed=8)
        for N in (5, 10):
            a = dense_taylor_oracle(p, 0, N=N)
            b = dense_taylor_oracle(p, 0, N=N + 5)
            assert np.abs(a - b).sum() <= 1 / (math.factorial(N) * N)

    def test_node_cap(self):
        huge = CscGraph(
            n=NODE_CAP + 1,
            col_ptr=np.zeros(NODE_CAP + 2, dtype=np.int64),
            row_idx=np.empty(0, dtype=np.int64),
            val=np.empty(0),
        )
        with pytest.raises(ValueError, match="cap"):
            dense_taylor_oracle(huge, 0)


class TestHornerFull:
    def test_matches_taylor_on_random_graphs(self):
        for seed in range(30):
            p = random_stochastic(20 + 2 * seed, seed=seed)
            a = dense_taylor_oracle(p, seed % p.n, N=17)
            b = horner_full(p, seed % p.n, N=17)
            assert np.abs(a - b).sum() <= 1e-12

    def test_degree_one(self, two_cycle):
        out = horner_full(two_cycle, 0, N=1)
        np.testing.assert_allclose(out, [1.0, 1.0])  # e_0 + P e_0
