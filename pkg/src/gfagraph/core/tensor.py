import numpy as np
from numpy.typing import ArrayLike, NDArray

from gfagraph.__logger__ import get_logger
from gfagraph.exceptions import ConfigurationError, DomainError

logger = get_logger(__name__)


def nodeToCoord(i: int, shape: tuple[int, int]) -> tuple[int, int]:
    """
    Return the pixel coordinate of a node. Nodes are numbered in row-major order.

    Parameters
    ----------
    i : int
        The node index, which must lie in ``[0, H*W)``.
    shape : tuple[int, int]
        The spatial shape ``(H, W)`` of the feature map.

    Returns
    -------
    (u, v) : tuple[int, int]
        The row ``u = i // W`` and the column ``v = i % W``.
    """
    height, width = shape
    i = int(i)
    if i < 0 or i >= height * width:
        logger.error("node index %s out of range for shape %s", i, shape)
        raise IndexError(
            f"Node index {i} out of range for a {height}x{width} feature map."
        )
    return i // width, i % width


def coordToNode(u: int, v: int, shape: tuple[int, int]) -> int:
    """
    Return the node index of a pixel coordinate. This is the inverse of ```nodeToCoord```.

    Parameters
    ----------
    u : int
        The row of the pixel.
    v : int
        The column of the pixel.
    shape : tuple[int, int]
        The spatial shape ``(H, W)`` of the feature map.

    Returns
    -------
    i : int
        The row-major node index ``u * W + v``.
    """
    height, width = shape
    if not (0 <= u < height and 0 <= v < width):
        logger.error("coordinate (%s, %s) out of range for shape %s", u, v, shape)
        raise IndexError(
            f"Coordinate ({u}, {v}) out of range for a {height}x{width} feature map."
        )
    return int(u) * width + int(v)


class FeatureMap:
    """A dense feature map with ``H`` rows, ``W`` columns and ``C`` channels.

    Every pixel is a graph node. The node ``i`` sits at ``nodeToCoord(i, (H, W))`` and
    carries the feature vector ``x_i`` of length ``C``. The values are stored row-major
    by ``(u, v, c)`` and cannot be changed after construction, so a map can be shared
    by parallel workers without copying. Values are rounded to float32 precision, the
    precision of FTEN files, and kept in float64 arrays.
    """

    def __init__(self, height: int, width: int, channels: int, data: ArrayLike):
        """
        The constructor takes the three dimensions and the values in row-major order.

        Parameters
        ----------
        height : int
            The number of rows ``H``.
        width : int
            The number of columns ``W``.
        channels : int
            The number of channels ``C``.
        data : ArrayLike
            ``H*W*C`` real values, row-major by ``(u, v, c)``. Nested arrays are flattened.

        Returns
        -------
        FeatureMap : gfagraph.core.tensor.FeatureMap
            An immutable feature map.
        """
        for label, value in (("height", height), ("width", width), ("channels", channels)):
            if int(value) != value or value < 1:
                logger.error("invalid %s %s for FeatureMap", label, value)
                raise ConfigurationError(
                    f"FeatureMap {label} must be a positive integer, got {value}."
                )
        self.height = int(height)
        self.width = int(width)
        self.channels = int(channels)

        values = np.array(data, dtype=np.float64).reshape(-1)
        expected = self.height * self.width * self.channels
        if values.size != expected:
            logger.error(
                "FeatureMap data length %s does not match %s", values.size, expected
            )
            raise ConfigurationError(
                f"FeatureMap data has {values.size} values, expected H*W*C = {expected}."
            )
        with np.errstate(over="ignore"):
            values = values.astype(np.float32).astype(np.float64)
        if not np.all(np.isfinite(values)):
            logger.error("FeatureMap data contains non-finite values")
            raise DomainError(
                "FeatureMap data must not contain NaN or Inf values or exceed the float32 range."
            )

        self._array = values.reshape(self.height, self.width, self.channels)
        self._array.flags.writeable = False

    @classmethod
    def fromArray(cls, array: ArrayLike) -> "FeatureMap":
        """
        Create a feature map from an array of shape ``(H, W, C)`` or ``(H, W)``.
        A two-dimensional array is treated as a single-channel map.
        """
        values = np.asarray(array, dtype=np.float64)
        if values.ndim == 2:
            values = values[:, :, None]
        if values.ndim != 3:
            logger.error("cannot build FeatureMap from array of shape %s", values.shape)
            raise ConfigurationError(
                f"Expected an array of shape (H, W, C) or (H, W), got {values.shape}."
            )
        return cls(values.shape[0], values.shape[1], values.shape[2], values)

    def __repr__(self) -> str:
        """
        Returns
        -------
        string_representation : String
            Representation of the object as character string.
        """
        return f"FeatureMap({self.height}, {self.width}, {self.channels})"

    def __eq__(self, other) -> bool:
        """
        Two feature maps are equal if they have the same shape and bitwise equal values.
        """
        if not isinstance(other, FeatureMap):
            return False
        return self.getShape() == other.getShape() and np.array_equal(
            self._array, other._array
        )

    @property
    def data(self) -> NDArray:
        """The flat, read-only row-major values."""
        return self._array.reshape(-1)

    def getShape(self) -> tuple[int, int, int]:
        return self.height, self.width, self.channels

    def getSpatialShape(self) -> tuple[int, int]:
        return self.height, self.width

    def getNumberNodes(self) -> int:
        return self.height * self.width

    def asArray(self) -> NDArray:
        """Return a read-only ``(H, W, C)`` view of the values."""
        return self._array

    def asMatrix(self) -> NDArray:
        """Return a read-only ``(N, C)`` view, one row per node."""
        return self._array.reshape(self.height * self.width, self.channels)

    def scaled(self, factor: float) -> "FeatureMap":
        """Return a new feature map with every value multiplied by ``factor``."""
        return FeatureMap.fromArray(self._array * factor)


def getFeature(fmap: FeatureMap, i: int) -> NDArray:
    """
    Return the feature vector ``x_i`` of a node.

    Parameters
    ----------
    fmap : gfagraph.core.tensor.FeatureMap
        The feature map.
    i : int
        The node index.

    Returns
    -------
    x_i : NDArray
        A copy of the ``C`` channel values of the node. Changing it does not change the map.
    """
    u, v = nodeToCoord(i, fmap.getSpatialShape())
    return fmap.asArray()[u, v, :].copy()
