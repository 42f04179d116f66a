import numpy as np
import pytest

from gfagraph.complexity.quotas import allocateQuotas
from gfagraph.complexity.scoring import computeScores
from gfagraph.core.config import GfaConfig
from gfagraph.core.tensor import FeatureMap
from gfagraph.exceptions import ConfigurationError, DomainError
from gfagraph.graph.construction import (
    THETA_QUANTILES,
    SimilarityRow,
    bisectionTrace,
    bisectThreshold,
    buildGraph,
    cosineRow,
    graphStats,
)
from gfagraph.oracle.reference import oracleTopk
from gfagraph.sampling.candidates import CandidateTable, buildCandidates


def _row(values) -> SimilarityRow:
    values = np.asarray(values, dtype=np.float32)
    return SimilarityRow(0, np.arange(values.size), values)


def _defaultGraph(fmap: FeatureMap, cfg: GfaConfig, threads: int = 1):
    table = CandidateTable.fromShape(
        fmap.getSpatialShape(), cfg.localWindow, cfg.gridSize, "both"
    )
    scores = computeScores(fmap, cfg.strategy, cfg.pooling)
    targets = allocateQuotas(scores, cfg.avgDegree, table.counts).targets
    return buildGraph(fmap, table, targets, cfg.iterations, threads)


class TestCosineRow:
    def test_values(self):
        fmap = FeatureMap(1, 3, 2, [1.0, 0.0, 0.0, 2.0, -3.0, 0.0])
        row = cosineRow(fmap, buildCandidates(0, (1, 3), 5, 1, "local-only"))
        assert row.sims.dtype == np.float32
        np.testing.assert_allclose(row.sims, [1.0, 0.0, -1.0])
        assert row.candidates.tolist() == [0, 1, 2]

    def test_zero_vector(self):
        fmap = FeatureMap(1, 2, 2, [0.0, 0.0, 1.0, 1.0])
        row = cosineRow(fmap, buildCandidates(0, (1, 2), 3, 1, "local-only"))
        assert row.sims.tolist() == [0.0, 0.0]

    def test_scale_invariance(self, randomMap):
        fmap = randomMap(4, 4, 3)
        candidates = buildCandidates(5, (4, 4), 3, 2)
        np.testing.assert_allclose(
            cosineRow(fmap.scaled(7.0), candidates).sims,
            cosineRow(fmap, candidates).sims,
            atol=1e-6,
        )

    def test_bounds(self, randomMap):
        fmap = randomMap(6, 6, 4)
        row = cosineRow(fmap, buildCandidates(14, (6, 6), 5, 3))
        assert np.all(np.abs(row.sims) <= 1.0)
        assert row.sims[row.candidates.tolist().index(14)] == pytest.approx(1.0)

    def test_mismatched_row(self):
        with pytest.raises(DomainError):
            SimilarityRow(0, [0, 1], [1.0])


class TestBisectThreshold:
    def test_top_one(self):
        theta, neighbors, degree = bisectThreshold(_row([0.9, 0.5, 0.1]), 1)
        assert neighbors.tolist() == [0]
        assert degree == 1
        assert 0.5 < theta <= 0.9

    def test_keep_all(self, rng):
        row = _row(rng.uniform(-1, 1, size=17))
        theta, neighbors, degree = bisectThreshold(row, 17)
        assert degree == 17
        assert theta == pytest.approx(float(row.sims.min()))

    def test_never_empty(self):
        _, neighbors, degree = bisectThreshold(_row([0.2, 0.2, 0.2, 0.9]), 1, iterations=1)
        assert degree >= 1
        assert 3 in neighbors.tolist()

    def test_ties_are_kept_together(self):
        _, neighbors, _ = bisectThreshold(_row([0.5, 0.5, 0.5, 0.5]), 2)
        assert neighbors.tolist() == [0, 1, 2, 3]

    def test_threshold_is_the_smallest_selected_similarity(self, rng):
        for _ in range(500):
            size = int(rng.integers(1, 120))
            row = _row(rng.uniform(-1, 1, size=size))
            theta, neighbors, _ = bisectThreshold(row, int(rng.integers(1, size + 1)))
            assert theta == row.sims[neighbors].min()
            assert neighbors.tolist() == np.flatnonzero(row.sims >= np.float32(theta)).tolist()

    def test_single_candidate(self):
        assert bisectThreshold(_row([0.3]), 1)[2] == 1

    @pytest.mark.parametrize("dStar", [0, 4])
    def test_target_out_of_range(self, dStar):
        with pytest.raises(DomainError):
            bisectThreshold(_row([0.1, 0.2, 0.3]), dStar)

    def test_empty_row(self):
        with pytest.raises(DomainError):
            bisectThreshold(_row([]), 1)

    def test_invalid_iterations(self):
        with pytest.raises(ConfigurationError):
            bisectThreshold(_row([0.1, 0.2]), 1, iterations=0)

    def test_interval_halves(self, rng):
        row = _row(rng.uniform(-1, 1, size=50))
        trace = bisectionTrace(row, 10, iterations=8)
        assert len(trace) == 8
        widths = [upper - lower for lower, upper in trace]
        for before, after in zip(widths[:-1], widths[1:]):
            assert after == pytest.approx(before / 2, rel=1e-9, abs=1e-12)
        for lower, upper in trace:
            assert row.sims.min() <= lower <= upper <= row.sims.max()

    def test_top_set_exactness(self):
        # random rows with sizes 1 to 400 and three tie structures
        rng = np.random.default_rng(2024)
        for case in range(10_000):
            size = int(rng.integers(1, 401))
            values = rng.uniform(-1, 1, size=size)
            if case % 3 == 1:
                values = np.round(values, 1)
            elif case % 3 == 2:
                values = rng.choice([-0.5, 0.0, 0.25, 1.0], size=size)
            row = _row(values)
            dStar = int(rng.integers(1, size + 1))
            theta, neighbors, degree = bisectThreshold(row, dStar)
            assert degree >= 1
            assert neighbors.tolist() == oracleTopk(row.sims, degree)
            assert neighbors.tolist() == np.flatnonzero(row.sims >= theta).tolist()


class TestBuildGraph:
    def test_single_node(self):
        fmap = FeatureMap(1, 1, 2, [0.3, -0.1])
        table = CandidateTable.fromShape((1, 1), 1, 1)
        graph = buildGraph(fmap, table, [1])
        assert graph.getNeighbors(0).tolist() == [0]
        assert graph.getDegrees().tolist() == [1]

    def test_top_set_and_threshold_consistency(self, randomMap, smallConfig):
        fmap = randomMap(12, 12, 4)
        graph = _defaultGraph(fmap, smallConfig)
        valid = graph.candidates.getValidMask()
        np.testing.assert_array_equal(
            graph.selected, valid & (graph.sims >= graph.thetas[:, None])
        )
        for i in range(graph.getNumberNodes()):
            row = graph.getSimilarityRow(i)
            chosen = graph.selected[i, : len(row)]
            assert chosen.any()
            if not chosen.all():
                assert row.sims[chosen].min() >= row.sims[~chosen].max()
            assert np.flatnonzero(chosen).tolist() == oracleTopk(row.sims, int(chosen.sum()))

    def test_thresholds_select_in_float32(self, randomMap, smallConfig):
        graph = _defaultGraph(randomMap(12, 12, 4), smallConfig)
        valid = graph.candidates.getValidMask()
        thetas = graph.thetas.astype(np.float32)
        np.testing.assert_array_equal(thetas.astype(np.float64), graph.thetas)
        np.testing.assert_array_equal(graph.selected, valid & (graph.sims >= thetas[:, None]))

    def test_counter_equals_candidates(self, randomMap, smallConfig):
        graph = _defaultGraph(randomMap(10, 9, 3), smallConfig)
        assert graph.similarityEvaluations == graph.candidates.getTotal()
        assert graph.getEdgesTotal() <= graph.candidates.getTotal()

    def test_thread_count_does_not_change_result(self, randomMap, monkeypatch):
        monkeypatch.setattr("gfagraph.utils.helpers._CHUNK_ELEMENTS", 4096)
        fmap = randomMap(24, 24, 4)
        cfg = GfaConfig(localWindow=5, gridSize=8, avgDegree=12)
        a = _defaultGraph(fmap, cfg, threads=1)
        b = _defaultGraph(fmap, cfg, threads=4)
        np.testing.assert_array_equal(a.sims, b.sims)
        np.testing.assert_array_equal(a.selected, b.selected)
        np.testing.assert_array_equal(a.thetas, b.thetas)

    def test_scale_keeps_neighbors(self, randomMap, smallConfig):
        fmap = randomMap(10, 10, 4)
        reference = _defaultGraph(fmap, smallConfig)
        for factor in (0.5, 3.0, 10.0):
            scaled = _defaultGraph(fmap.scaled(factor), smallConfig)
            np.testing.assert_array_equal(scaled.selected, reference.selected)

    def test_power_of_two_scale_is_exact(self, randomMap, smallConfig):
        fmap = randomMap(10, 10, 4)
        reference = _defaultGraph(fmap, smallConfig)
        for factor in (0.5, 2.0, 8.0):
            scaled = _defaultGraph(fmap.scaled(factor), smallConfig)
            np.testing.assert_array_equal(scaled.sims, reference.sims)
            np.testing.assert_array_equal(scaled.thetas, reference.thetas)

    def test_accepts_candidate_sets(self, randomMap):
        fmap = randomMap(3, 3, 2)
        sets = [buildCandidates(i, (3, 3), 3, 1) for i in range(9)]
        graph = buildGraph(fmap, sets, [2] * 9)
        assert graph.getNumberNodes() == 9
        assert len(graph.getNeighbors(4)) == len(graph.getNeighborSims(4))

    def test_invalid_targets(self, randomMap):
        fmap = randomMap(3, 3, 2)
        table = CandidateTable.fromShape((3, 3), 3, 1, "local-only")
        with pytest.raises(DomainError):
            buildGraph(fmap, table, [0] * 9)
        with pytest.raises(DomainError):
            buildGraph(fmap, table, [2] * 8)
        with pytest.raises(DomainError):
            buildGraph(fmap, table, [10] * 9)

    def test_shape_mismatch(self, randomMap):
        table = CandidateTable.fromShape((3, 3), 3, 1)
        with pytest.raises(ConfigurationError):
            buildGraph(randomMap(3, 4, 1), table, [1] * 9)

    def test_neighbor_index_out_of_range(self, randomMap, smallConfig):
        graph = _defaultGraph(randomMap(4, 4, 2), smallConfig)
        with pytest.raises(IndexError):
            graph.getNeighbors(16)

    def test_stats(self, randomMap, smallConfig):
        graph = _defaultGraph(randomMap(8, 8, 3), smallConfig)
        stats = graphStats(graph)
        assert set(stats) == {
            "mean_degree",
            "degree_hist",
            "mean_abs_deviation",
            "edges_total",
            "theta_quantiles",
        }
        assert sum(stats["degree_hist"]) == 64
        assert len(stats["theta_quantiles"]) == len(THETA_QUANTILES)
        assert stats["edges_total"] == graph.getEdgesTotal()
        assert stats == graph.stats()


class TestDegreeTargeting:
    def test_defaults_on_random_tensor(self):
        fmap = FeatureMap.fromArray(np.random.default_rng(7).standard_normal((64, 64, 8)))
        cfg = GfaConfig()
        deviations = {
            iterations: _defaultGraph(fmap, cfg.replace(iterations=iterations)).getMeanAbsDeviation()
            for iterations in (1, 5)
        }
        assert deviations[5] <= 0.15 * cfg.avgDegree
        assert deviations[5] < deviations[1]
