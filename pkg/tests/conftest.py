import numpy as np
import pytest

from gfagraph.core.config import GfaConfig
from gfagraph.core.tensor import FeatureMap


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def randomMap(rng):
    """Factory for feature maps with standard normal values."""

    def make(height: int, width: int, channels: int) -> FeatureMap:
        return FeatureMap.fromArray(rng.standard_normal((height, width, channels)))

    return make


@pytest.fixture
def smallConfig():
    """A configuration small enough for the loop-based reference implementations."""
    return GfaConfig(localWindow=3, gridSize=4, avgDegree=6, iterations=5)


@pytest.fixture
def checkerboard():
    """A 16 x 32 gray map, flat 0.5 on the left half and a 2 x 2 cell checkerboard on the right."""
    values = np.full((16, 32), 0.5)
    u, v = np.meshgrid(np.arange(16), np.arange(32), indexing="ij")
    cells = ((u // 2) + (v // 2)) % 2
    values[:, 16:] = cells[:, 16:].astype(np.float64)
    return FeatureMap.fromArray(values)
