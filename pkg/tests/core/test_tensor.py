import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gfagraph.core.tensor import FeatureMap, coordToNode, getFeature, nodeToCoord
from gfagraph.exceptions import ConfigurationError, DomainError


class TestNodeIndex:
    @pytest.mark.parametrize(
        "i, expected", [(0, (0, 0)), (5, (1, 1)), (15, (3, 3)), (7, (1, 3))]
    )
    def test_nodeToCoord(self, i, expected):
        assert nodeToCoord(i, (4, 4)) == expected

    def test_non_square_shape(self):
        assert nodeToCoord(5, (2, 3)) == (1, 2)
        assert coordToNode(1, 2, (2, 3)) == 5

    @pytest.mark.parametrize("i", [-1, 16, 100])
    def test_out_of_range(self, i):
        with pytest.raises(IndexError):
            nodeToCoord(i, (4, 4))

    def test_coord_out_of_range(self):
        with pytest.raises(IndexError):
            coordToNode(4, 0, (4, 4))

    @given(
        height=st.integers(min_value=1, max_value=20),
        width=st.integers(min_value=1, max_value=20),
        data=st.data(),
    )
    def test_round_trip(self, height, width, data):
        i = data.draw(st.integers(min_value=0, max_value=height * width - 1))
        u, v = nodeToCoord(i, (height, width))
        assert 0 <= u < height and 0 <= v < width
        assert coordToNode(u, v, (height, width)) == i


class TestFeatureMap:
    def test_shape_and_layout(self):
        fmap = FeatureMap(2, 3, 4, np.arange(24))
        assert fmap.getShape() == (2, 3, 4)
        assert fmap.getSpatialShape() == (2, 3)
        assert fmap.getNumberNodes() == 6
        assert fmap.asArray()[1, 2, 3] == 23
        assert fmap.asMatrix().shape == (6, 4)
        assert repr(fmap) == "FeatureMap(2, 3, 4)"

    def test_length_mismatch(self):
        with pytest.raises(ConfigurationError):
            FeatureMap(2, 2, 1, [1.0, 2.0, 3.0])

    @pytest.mark.parametrize("dims", [(0, 1, 1), (1, 0, 1), (1, 1, 0)])
    def test_empty_dims(self, dims):
        with pytest.raises(ConfigurationError):
            FeatureMap(*dims, [])

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_non_finite(self, bad):
        with pytest.raises(DomainError):
            FeatureMap(1, 2, 1, [0.0, bad])

    def test_values_rounded_to_float32(self):
        fmap = FeatureMap(1, 2, 1, [0.1, 1.0 / 3.0])
        assert fmap.data.dtype == np.float64
        np.testing.assert_array_equal(fmap.data, np.array([0.1, 1.0 / 3.0], dtype=np.float32))

    @pytest.mark.parametrize("big", [1e39, -1e300])
    def test_outside_float32_range(self, big):
        with pytest.raises(DomainError):
            FeatureMap(1, 2, 1, [0.0, big])

    def test_immutable(self):
        fmap = FeatureMap(1, 2, 1, [0.0, 1.0])
        with pytest.raises(ValueError):
            fmap.asArray()[0, 0, 0] = 5.0
        with pytest.raises(ValueError):
            fmap.data[0] = 5.0

    def test_fromArray_two_dimensional(self):
        fmap = FeatureMap.fromArray(np.ones((3, 2)))
        assert fmap.getShape() == (3, 2, 1)

    def test_fromArray_rejects_vectors(self):
        with pytest.raises(ConfigurationError):
            FeatureMap.fromArray(np.ones(4))

    def test_equality(self):
        a = FeatureMap(1, 2, 1, [0.0, 1.0])
        assert a == FeatureMap(1, 2, 1, [0.0, 1.0])
        assert a != FeatureMap(2, 1, 1, [0.0, 1.0])
        assert a != FeatureMap(1, 2, 1, [0.0, 2.0])
        assert a != "FeatureMap(1, 2, 1)"

    def test_scaled(self):
        fmap = FeatureMap(1, 2, 1, [1.0, -2.0]).scaled(3.0)
        np.testing.assert_array_equal(fmap.data, [3.0, -6.0])


class TestGetFeature:
    def test_constant_map(self):
        fmap = FeatureMap(3, 3, 5, np.full(45, 2.0))
        np.testing.assert_array_equal(getFeature(fmap, 4), np.full(5, 2.0))

    def test_first_node(self):
        fmap = FeatureMap(2, 2, 3, np.arange(12))
        np.testing.assert_array_equal(getFeature(fmap, 0), [0, 1, 2])

    def test_single_node(self):
        fmap = FeatureMap(1, 1, 4, [1.0, 2.0, 3.0, 4.0])
        np.testing.assert_array_equal(getFeature(fmap, 0), fmap.data)

    def test_returns_copy(self):
        fmap = FeatureMap(1, 1, 2, [1.0, 2.0])
        feature = getFeature(fmap, 0)
        feature[0] = 10.0
        assert fmap.data[0] == 1.0

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            getFeature(FeatureMap(1, 1, 1, [0.0]), 1)

    @given(
        height=st.integers(1, 6),
        width=st.integers(1, 6),
        channels=st.integers(1, 4),
        data=st.data(),
    )
    def test_matches_flat_layout(self, height, width, channels, data):
        fmap = FeatureMap(height, width, channels, np.arange(height * width * channels))
        i = data.draw(st.integers(0, height * width - 1))
        u, v = nodeToCoord(i, (height, width))
        for c in range(channels):
            assert getFeature(fmap, i)[c] == fmap.data[(u * width + v) * channels + c]
