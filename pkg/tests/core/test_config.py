import pytest

from gfagraph.core.config import GfaConfig
from gfagraph.exceptions import ConfigurationError


class TestGfaConfig:
    def test_defaults(self):
        cfg = GfaConfig()
        assert cfg.localWindow == 8
        assert cfg.gridSize == 16
        assert cfg.avgDegree == 64
        assert cfg.iterations == 5
        assert cfg.pooling == "rms"
        assert cfg.strategy == "sobel"
        assert cfg.order == "global-then-local"
        assert cfg.passes == "dual"
        assert cfg.seed == 0

    @pytest.mark.parametrize(
        "changes",
        [
            {"localWindow": 0},
            {"gridSize": -1},
            {"avgDegree": 0},
            {"iterations": 0},
            {"iterations": 2.5},
            {"avgDegree": True},
            {"pooling": "max"},
            {"strategy": "canny"},
            {"order": "random"},
            {"passes": "triple"},
            {"seed": -1},
        ],
    )
    def test_invalid_values(self, changes):
        with pytest.raises(ConfigurationError):
            GfaConfig(**changes)

    def test_fromDict_partial(self):
        cfg = GfaConfig.fromDict({"localWindow": 3, "strategy": "none"})
        assert cfg == GfaConfig(localWindow=3, strategy="none")

    def test_fromDict_unknown_key(self):
        with pytest.raises(ConfigurationError, match="threshold"):
            GfaConfig.fromDict({"threshold": 0.5})

    def test_fromDict_not_an_object(self):
        with pytest.raises(ConfigurationError):
            GfaConfig.fromDict([1, 2])

    def test_toDict_round_trip(self):
        cfg = GfaConfig(gridSize=4, order="local-then-global", seed=7)
        assert GfaConfig.fromDict(cfg.toDict()) == cfg
        assert list(cfg.toDict()) == list(GfaConfig.FIELDS)

    def test_replace(self):
        cfg = GfaConfig()
        other = cfg.replace(avgDegree=16)
        assert other.avgDegree == 16
        assert cfg.avgDegree == 64
        with pytest.raises(ConfigurationError):
            cfg.replace(avgDegree=0)

    @pytest.mark.parametrize(
        "order, passes, expected",
        [
            ("global-then-local", "dual", ["global", "local"]),
            ("local-then-global", "dual", ["local", "global"]),
            ("global-then-local", "local-only", ["local"]),
            ("local-then-global", "global-only", ["global"]),
        ],
    )
    def test_passKinds(self, order, passes, expected):
        assert GfaConfig(order=order, passes=passes).passKinds() == expected

    def test_repr(self):
        assert repr(GfaConfig()).startswith("GfaConfig(localWindow=8, gridSize=16")
