import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from expgraph.taylor import (
    TaylorParams,
    psi_weights,
    queue_thresholds,
    select_degree_bound,
    select_degree_exact,
)


def psi_direct(N: int, j: int) -> float:
    """Independent evaluation of the weights by direct rational summation."""
    total = Fraction(0)
    for m in range(N - j + 1):
        total += Fraction(math.factorial(j), math.factorial(j + m))
    return float(total)


class TestDegreeSelection:
    @pytest.mark.parametrize(
        "eps,expected", [(1e-5, 8), (1e-10, 13), (1e-15, 17)]
    )
    def test_exact_reference_values(self, eps, expected):
        assert select_degree_exact(eps) == expected

    @pytest.mark.parametrize(
        "eps,expected",
        [
            (1e-5, 24),
            # 2*ln(1e10) = 46.05...; we round up, so 47 rather than 46.
            (1e-10, 47),
            (0.9, 3),
        ],
    )
    def test_bound_values(self, eps, expected):
        assert select_degree_bound(eps) == expected

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.5, 2.0])
    def test_rejects_out_of_range(self, eps):
        with pytest.raises(ValueError):
            select_degree_exact(eps)
        with pytest.raises(ValueError):
            select_degree_bound(eps)

    def test_exact_never_exceeds_bound(self):
        for k in range(1, 16):
            eps = 10.0 ** -k
            assert select_degree_exact(eps) <= select_degree_bound(eps)

    def test_exact_is_minimal(self):
        # One degree fewer must leave a remainder above eps.
        for eps in (1e-3, 1e-7, 1e-12):
            N = select_degree_exact(eps)
            tail = math.e - math.fsum(1 / math.factorial(l) for l in range(N))
            assert tail > eps

    def test_truncation_within_half_budget(self):
        for eps in (1e-2, 1e-5, 1e-9):
            params = TaylorParams.for_tolerance(eps)
            tail = math.e - math.fsum(
                1 / math.factorial(l) for l in range(params.N + 1)
            )
            assert tail <= params.theta * eps + 1e-16


class TestPsiWeights:
    def test_small_case(self):
        assert psi_weights(2) == [2.5, 1.5, 1.0]

    @pytest.mark.parametrize("N", [1, 2, 5, 17, 40])
    def test_last_entry_is_one(self, N):
        assert psi_weights(N)[-1] == 1.0

    def test_psi0_is_partial_exponential_sum(self):
        psis = psi_weights(17)
        expected = math.fsum(1 / math.factorial(m) for m in range(18))
        assert psis[0] == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("N", [1, 3, 8, 17])
    def test_recurrence_matches_direct_summation(self, N):
        psis = psi_weights(N)
        for j in range(N + 1):
            assert psis[j] == pytest.approx(psi_direct(N, j), abs=1e-14)

    @given(st.integers(min_value=1, max_value=60))
    def test_monotone_and_bounded(self, N):
        psis = psi_weights(N)
        assert all(b <= a for a, b in zip(psis, psis[1:]))
        assert psis[0] <= math.e

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            psi_weights(0)


class TestQueueThresholds:
    def test_direct_formula(self):
        params = TaylorParams(N=2, psi=tuple(psi_weights(2)), eps=1e-2)
        bases = queue_thresholds(params)
        assert bases[2] == pytest.approx(0.005 / (2 * 1.0), abs=1e-18)

    def test_nondecreasing_in_block(self):
        params = TaylorParams.for_tolerance(1e-6)
        bases = queue_thresholds(params)
        assert all(a <= b for a, b in zip(bases, bases[1:]))

    def test_span_ratio_approaches_e(self):
        params = TaylorParams.for_tolerance(1e-12)
        bases = queue_thresholds(params)
        assert bases[-1] / bases[0] == pytest.approx(params.psi[0], rel=1e-12)
        assert bases[-1] / bases[0] == pytest.approx(math.e, rel=1e-6)

    def test_pseudocode_variant_scales_by_e(self):
        params = TaylorParams.for_tolerance(1e-4)
        tight = queue_thresholds(params)
        loose = queue_thresholds(params, pseudocode_factor_e=True)
        for a, b in zip(tight, loose):
            assert b == pytest.approx(math.e * a, rel=1e-15)
