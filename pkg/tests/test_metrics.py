import numpy as np
import pytest

from expgraph.graph import from_edges, normalize_to_stochastic
from expgraph.metrics import (
    CSV_HEADER,
    nnz_error_curve,
    one_norm_error,
    precision_at_k,
    read_csv,
    work_accounting,
    write_csv,
)
from expgraph.solvers import gexpm


class TestPrecisionAtK:
    def test_perfect_agreement(self):
        v = {0: 0.5, 1: 0.3, 2: 0.2}
        r = precision_at_k(v, v, 2)
        assert r.precision == 1.0
        assert r.effective_k == 2

    def test_half_overlap(self):
        approx = {0: 0.9, 1: 0.8, 2: 0.1, 3: 0.05}
        truth = {0: 0.9, 3: 0.8, 4: 0.7}
        r = precision_at_k(approx, truth, 2)
        assert r.precision == 0.5  # only node 0 is shared in the top 2

    def test_dense_and_sparse_inputs_agree(self):
        truth = np.array([0.0, 0.4, 0.1, 0.5])
        approx = {1: 0.4, 3: 0.5, 2: 0.1}
        r = precision_at_k(approx, truth, 3)
        assert r.precision == 1.0

    def test_ties_rank_smaller_node_first(self):
        truth = {0: 1.0, 1: 0.5, 2: 0.5}
        approx = {0: 1.0, 1: 0.5}
        assert precision_at_k(approx, truth, 2).precision == 1.0

    def test_seed_neighbor_exclusion(self):
        # Star seed 0 with leaves 1..3 plus an outsider chain node 4.
        g = normalize_to_stochastic(
            from_edges(5, [0, 0, 0, 1, 2, 3, 4], [1, 2, 3, 0, 0, 4, 3])
        )
        truth = {0: 0.9, 1: 0.5, 2: 0.5, 3: 0.5, 4: 0.01}
        approx = {4: 1.0}
        r = precision_at_k(truth, approx, 1, exclude="seed+neighbors", g=g, c=0)
        # Everything but node 4 is excluded, so both rankings reduce to {4}.
        assert r.precision == 1.0
        assert r.effective_k == 1

    def test_effective_k_shrinks(self):
        truth = {0: 1.0, 1: 0.5}
        r = precision_at_k(truth, truth, 10)
        assert r.effective_k == 2
        assert r.precision == 1.0

    def test_exclusion_needs_graph(self):
        with pytest.raises(ValueError):
            precision_at_k({0: 1.0}, {0: 1.0}, 1, exclude="seed+neighbors")

    def test_unknown_policy(self):
        with pytest.raises(ValueError, match="exclusion"):
            precision_at_k({0: 1.0}, {0: 1.0}, 1, exclude="bogus")

    def test_bad_k(self):
        with pytest.raises(ValueError):
            precision_at_k({0: 1.0}, {0: 1.0}, 0)


class TestOneNormError:
    def test_identical(self):
        assert one_norm_error({0: 0.5}, {0: 0.5}) == 0.0

    def test_disjoint_supports(self):
        assert one_norm_error({0: 0.5}, {1: 0.25}) == 0.75

    def test_sparse_vs_dense(self):
        dense = np.array([0.1, 0.0, 0.4])
        assert one_norm_error({0: 0.1, 2: 0.3}, dense) == pytest.approx(0.1)


class TestNnzErrorCurve:
    def test_simple(self):
        curve = nnz_error_curve({0: 0.5, 1: 0.3, 2: 0.2})
        assert curve == [(1, pytest.approx(0.5)), (2, pytest.approx(0.2)), (3, 0.0)]

    def test_monotone_nonincreasing(self):
        rng = np.random.default_rng(3)
        v = {i: float(x) for i, x in enumerate(rng.random(50))}
        curve = nnz_error_curve(v)
        errs = [e for _, e in curve]
        assert all(b <= a for a, b in zip(errs, errs[1:]))
        assert errs[-1] == 0.0


class TestWorkAccounting:
    def test_matches_report_ratio(self, two_cycle):
        report = gexpm(two_cycle, 0, 1e-4)
        assert work_accounting(report, two_cycle) == report.effective_matvecs
        assert work_accounting(report, two_cycle) == report.edge_touches / 2


class TestCsvRoundTrip:
    def test_round_trip(self, tmp_path):
        rows = [
            ["ff-1000", "7", "gexpm", "1e-05", "one_norm_error", "3.2e-06"],
            ["ff-1000", "7", "expmimv", "z=100", "precision_at_100", "0.99"],
        ]
        path = tmp_path / "results.csv"
        write_csv(path, rows)
        back = read_csv(path)
        assert len(back) == 2
        assert back[0] == dict(zip(CSV_HEADER, rows[0]))
        assert back[1]["param"] == "z=100"

    def test_rejects_wrong_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError, match="header"):
            read_csv(path)
