import itertools

import numpy as np
import pytest

from gfagraph.aggregate.aggregation import ProjectionWeights
from gfagraph.aggregate.pipeline import (
    PassStats,
    StageSpec,
    buildPassGraph,
    gfaBlock,
    gfaBlockWithStats,
    runPipeline,
    statsToDict,
)
from gfagraph.core.config import GfaConfig
from gfagraph.core.tensor import FeatureMap
from gfagraph.exceptions import ConfigurationError
from gfagraph.oracle.reference import compareAggregate, oracleAggregate


class TestGfaBlock:
    def test_output_shape_and_stats(self, randomMap, smallConfig):
        fmap = randomMap(8, 8, 4)
        out, stats = gfaBlockWithStats(fmap, smallConfig)
        assert out.getShape() == (8, 8, 4)
        assert [s.kind for s in stats] == ["global", "local"]
        assert all(isinstance(s, PassStats) for s in stats)
        assert all(s.similarityEvaluations == s.candidatesTotal for s in stats)

    def test_pass_order(self, randomMap, smallConfig):
        fmap = randomMap(8, 8, 3)
        _, stats = gfaBlockWithStats(fmap, smallConfig.replace(order="local-then-global"))
        assert [s.kind for s in stats] == ["local", "global"]
        assert gfaBlock(fmap, smallConfig) != gfaBlock(
            fmap, smallConfig.replace(order="local-then-global")
        )

    @pytest.mark.parametrize("passes, kind", [("local-only", "local"), ("global-only", "global")])
    def test_single_pass(self, randomMap, smallConfig, passes, kind):
        _, stats = gfaBlockWithStats(randomMap(8, 8, 2), smallConfig.replace(passes=passes))
        assert [s.kind for s in stats] == [kind]

    def test_channel_change(self, randomMap, smallConfig):
        out = gfaBlock(randomMap(8, 8, 3), smallConfig, channels=5)
        assert out.channels == 5

    def test_weights_per_pass(self, randomMap, smallConfig):
        fmap = randomMap(6, 6, 2)
        weights = [ProjectionWeights.seeded(2, 2, (0, 0, 0, k)) for k in range(2)]
        assert gfaBlock(fmap, smallConfig, weights) == gfaBlock(fmap, smallConfig)
        with pytest.raises(ConfigurationError):
            gfaBlock(fmap, smallConfig, weights[:1])
        with pytest.raises(ConfigurationError):
            gfaBlock(fmap, smallConfig, channels=0)

    def test_pass_kind(self, randomMap, smallConfig):
        with pytest.raises(ConfigurationError):
            buildPassGraph(randomMap(4, 4, 1), smallConfig, "both")

    def test_deterministic(self, randomMap, monkeypatch):
        monkeypatch.setattr("gfagraph.utils.helpers._CHUNK_ELEMENTS", 2048)
        fmap = randomMap(16, 16, 4)
        cfg = GfaConfig(localWindow=4, gridSize=8, avgDegree=10, seed=3)
        first = gfaBlock(fmap, cfg)
        assert gfaBlock(fmap, cfg) == first
        assert gfaBlock(fmap, cfg, threads=4) == first

    def test_scale_equivariance(self, randomMap, smallConfig):
        fmap = randomMap(10, 10, 4)
        out, stats = gfaBlockWithStats(fmap, smallConfig)
        for factor in (0.5, 3.0, 10.0):
            scaled, scaledStats = gfaBlockWithStats(fmap.scaled(factor), smallConfig)
            np.testing.assert_allclose(scaled.asArray(), factor * out.asArray(), rtol=1e-5, atol=1e-9)
            assert [s.edgesTotal for s in scaledStats] == [s.edgesTotal for s in stats]

    def test_ablation_variants_differ(self, randomMap, smallConfig):
        fmap = randomMap(32, 32, 3)
        outputs = {}
        for strategy, pooling, order in itertools.product(
            ["none", "sobel", "rescaling-residual", "local-entropy"],
            ["rms", "mean"],
            ["global-then-local", "local-then-global"],
        ):
            cfg = smallConfig.replace(strategy=strategy, pooling=pooling, order=order)
            outputs[(strategy, pooling, order)] = gfaBlock(fmap, cfg)
        for a, b in itertools.combinations(outputs, 2):
            # pooling has no effect without scores
            if a[0] == b[0] == "none" and a[2] == b[2]:
                assert outputs[a] == outputs[b]
            else:
                assert outputs[a] != outputs[b], (a, b)


class TestOracleEquivalence:
    @pytest.mark.parametrize(
        "strategy", ["none", "sobel", "rescaling-residual", "local-entropy"]
    )
    @pytest.mark.parametrize("order", ["global-then-local", "local-then-global"])
    def test_small_configs(self, rng, smallConfig, strategy, order):
        cfg = smallConfig.replace(strategy=strategy, order=order, pooling="mean")
        for case in range(3):
            shape = (int(rng.integers(4, 11)), int(rng.integers(4, 11)), 3)
            fmap = FeatureMap.fromArray(rng.standard_normal(shape))
            report = compareAggregate(fmap, cfg, caseId=f"{strategy}-{order}-{case}")
            assert report.passed, report

    def test_fifty_random_cases(self, rng):
        strategies = ["none", "sobel", "rescaling-residual", "local-entropy"]
        orders = ["global-then-local", "local-then-global"]
        for case in range(50):
            cfg = GfaConfig(
                localWindow=4,
                gridSize=8,
                avgDegree=12,
                strategy=strategies[case % 4],
                order=orders[(case // 4) % 2],
                seed=case,
            )
            fmap = FeatureMap.fromArray(rng.standard_normal((16, 16, 8)))
            report = compareAggregate(fmap, cfg, caseId=f"random-{case}")
            assert report.passed, report

    def test_default_config(self, randomMap):
        fmap = randomMap(16, 16, 8)
        cfg = GfaConfig()
        np.testing.assert_allclose(
            gfaBlock(fmap, cfg).asArray(), oracleAggregate(fmap, cfg).asArray(), atol=1e-5
        )

    def test_channel_change(self, randomMap, smallConfig):
        fmap = randomMap(6, 7, 2)
        np.testing.assert_allclose(
            gfaBlock(fmap, smallConfig, channels=4).asArray(),
            oracleAggregate(fmap, smallConfig, channels=4).asArray(),
            atol=1e-5,
        )


class TestRunPipeline:
    def test_zero_blocks(self, randomMap, smallConfig):
        fmap = randomMap(5, 5, 2)
        result = runPipeline(fmap, [StageSpec(0, smallConfig)])
        assert result.output == fmap
        assert result.passStats == []

    def test_one_block_is_gfaBlock(self, randomMap, smallConfig):
        fmap = randomMap(6, 6, 3)
        assert runPipeline(fmap, [StageSpec(1, smallConfig)]).output == gfaBlock(fmap, smallConfig)

    def test_stages(self, randomMap, smallConfig):
        fmap = randomMap(8, 8, 3)
        result = runPipeline(
            fmap,
            [StageSpec(2, smallConfig, channels=4), StageSpec(1, smallConfig.replace(passes="local-only"))],
        )
        assert result.output.getShape() == (8, 8, 4)
        stats = result.statsDict()
        assert stats["stage"] == [0, 0, 0, 0, 1]
        assert stats["block"] == [0, 0, 1, 1, 0]
        assert stats["kind"] == ["global", "local", "global", "local", "local"]
        assert stats == statsToDict(result.passStats)

    def test_blocks_use_different_seeds(self, randomMap, smallConfig):
        fmap = randomMap(6, 6, 2)
        twice = runPipeline(fmap, [StageSpec(2, smallConfig)]).output
        assert twice != gfaBlock(gfaBlock(fmap, smallConfig), smallConfig)

    def test_invalid_block_count(self, smallConfig):
        with pytest.raises(ConfigurationError):
            StageSpec(-1, smallConfig)
