import numpy as np
from numpy.typing import NDArray

from gfagraph.__logger__ import get_logger
from gfagraph.core.config import POOLING_MODES, SCORING_STRATEGIES
from gfagraph.core.tensor import FeatureMap
from gfagraph.exceptions import ConfigurationError

logger = get_logger(__name__)

SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
SOBEL_Y = SOBEL_X.T.copy()

ENTROPY_BINS = 8


def _checkPooling(pooling: str) -> None:
    if pooling not in POOLING_MODES:
        logger.error("unknown pooling %s", pooling)
        raise ConfigurationError(
            f"Pooling must be one of {', '.join(POOLING_MODES)}, got {pooling!r}."
        )


def _boxSum3x3(padded: NDArray, height: int, width: int) -> NDArray:
    out = np.zeros((height, width) + padded.shape[2:], dtype=np.float64)
    for a in range(3):
        for b in range(3):
            out += padded[a : a + height, b : b + width]
    return out


def _smoothed(first: NDArray, middle: NDArray, last: NDArray) -> NDArray:
    weights = SOBEL_X[:, 2]
    return weights[0] * first + weights[1] * middle + weights[2] * last


def sobelGradients(fmap: FeatureMap) -> tuple[NDArray, NDArray]:
    """
    Compute the per-channel Sobel gradients of a feature map.

    The 3x3 kernels are applied as a correlation (no kernel flip), so a map that
    increases by one per column has ``Sx = 8`` in the interior. Borders are handled by
    replicating the edge pixels. Each gradient is the difference of two identically
    smoothed border lines of the window, so constant maps give exactly zero.

    Parameters
    ----------
    fmap : gfagraph.core.tensor.FeatureMap
        The feature map.

    Returns
    -------
    (Sx, Sy) : tuple[NDArray, NDArray]
        Two arrays of shape ``(H, W, C)``.
    """
    height, width, _ = fmap.getShape()
    p = np.pad(fmap.asArray(), ((1, 1), (1, 1), (0, 0)), mode="edge")
    rows = [slice(a, a + height) for a in range(3)]
    cols = [slice(b, b + width) for b in range(3)]
    right = _smoothed(p[rows[0], cols[2]], p[rows[1], cols[2]], p[rows[2], cols[2]])
    left = _smoothed(p[rows[0], cols[0]], p[rows[1], cols[0]], p[rows[2], cols[0]])
    bottom = _smoothed(p[rows[2], cols[0]], p[rows[2], cols[1]], p[rows[2], cols[2]])
    top = _smoothed(p[rows[0], cols[0]], p[rows[0], cols[1]], p[rows[0], cols[2]])
    return right - left, bottom - top


def rmsGScore(fmap: FeatureMap, pooling: str = "rms") -> NDArray:
    """
    Compute the RMS-gradient complexity score of every node.

    Parameters
    ----------
    fmap : gfagraph.core.tensor.FeatureMap
        The feature map.
    pooling : String
        ``"rms"`` pools the channel gradient magnitudes by root mean square,
        ``"mean"`` by their arithmetic mean.

    Returns
    -------
    NDArray
        ``N`` nonnegative scores in node order.
    """
    _checkPooling(pooling)
    sx, sy = sobelGradients(fmap)
    squared = sx * sx + sy * sy
    if pooling == "rms":
        score = np.sqrt(np.mean(squared, axis=2))
    else:
        score = np.mean(np.sqrt(squared), axis=2)
    return score.reshape(-1)


def _poolChannels(values: NDArray, pooling: str) -> NDArray:
    if pooling == "rms":
        return np.sqrt(np.mean(values * values, axis=2))
    return np.mean(values, axis=2)


def rescalingResidual(fmap: FeatureMap, pooling: str = "rms") -> NDArray:
    """
    Score nodes by how much detail is lost when the map is halved and upsampled again.

    Down-sampling averages 2x2 blocks (odd sizes are padded by replicating the last
    row/column), up-sampling repeats every value 2x2. The residual magnitude is
    pooled across channels.
    """
    _checkPooling(pooling)
    height, width, channels = fmap.getShape()
    array = fmap.asArray()
    padded = np.pad(array, ((0, height % 2), (0, width % 2), (0, 0)), mode="edge")
    blocks = padded.reshape(padded.shape[0] // 2, 2, padded.shape[1] // 2, 2, channels)
    # pairwise sums keep constant blocks exact
    down = (
        (blocks[:, 0, :, 0] + blocks[:, 0, :, 1]) + (blocks[:, 1, :, 0] + blocks[:, 1, :, 1])
    ) / 4.0
    up = np.repeat(np.repeat(down, 2, axis=0), 2, axis=1)[:height, :width]
    residual = np.abs(array - up)
    return _poolChannels(residual, pooling).reshape(-1)


def localEntropy(fmap: FeatureMap, pooling: str = "rms") -> NDArray:
    """
    Score nodes by the Shannon entropy (bits) of the value histogram in their 3x3 neighborhood.

    Channels are pooled first (root mean square or mean of the raw values), the pooled
    map is quantized into ```ENTROPY_BINS``` equal bins between its global minimum and
    maximum, and the histogram of the 9 replicate-padded neighbors is evaluated.
    """
    _checkPooling(pooling)
    height, width, _ = fmap.getShape()
    pooled = _poolChannels(fmap.asArray(), pooling)
    low, high = float(pooled.min()), float(pooled.max())
    if not high > low:
        return np.zeros(height * width)

    bins = np.floor((pooled - low) / (high - low) * ENTROPY_BINS).astype(np.int64)
    bins = np.clip(bins, 0, ENTROPY_BINS - 1)
    onehot = np.eye(ENTROPY_BINS)[np.pad(bins, 1, mode="edge")]
    counts = _boxSum3x3(onehot, height, width)
    prob = counts / 9.0
    logs = np.log2(np.where(prob > 0, prob, 1.0))
    entropy = -np.sum(prob * logs, axis=2)
    # the single-bin case yields -0.0
    return (entropy + 0.0).reshape(-1)


def altScores(fmap: FeatureMap, strategy: str, pooling: str = "rms") -> NDArray:
    """
    Compute one of the baseline complexity scores.

    Parameters
    ----------
    fmap : gfagraph.core.tensor.FeatureMap
        The feature map.
    strategy : String
        ``"rescaling-residual"`` or ``"local-entropy"``.
    pooling : String
        Channel pooling, ``"rms"`` or ``"mean"``.

    Returns
    -------
    NDArray
        ``N`` nonnegative scores in node order.
    """
    if strategy == "rescaling-residual":
        return rescalingResidual(fmap, pooling)
    if strategy == "local-entropy":
        return localEntropy(fmap, pooling)
    logger.error("unknown baseline scoring strategy %s", strategy)
    raise ConfigurationError(
        f"Baseline strategy must be rescaling-residual or local-entropy, got {strategy!r}."
    )


def computeScores(fmap: FeatureMap, strategy: str = "sobel", pooling: str = "rms") -> NDArray:
    """
    Compute the complexity scores for any of the ```SCORING_STRATEGIES```.
    The strategy ``"none"`` returns zeros, which the quota allocation turns into a
    uniform degree for every node.
    """
    if strategy not in SCORING_STRATEGIES:
        logger.error("unknown scoring strategy %s", strategy)
        raise ConfigurationError(
            f"Scoring strategy must be one of {', '.join(SCORING_STRATEGIES)}, got {strategy!r}."
        )
    if strategy == "none":
        _checkPooling(pooling)
        return np.zeros(fmap.getNumberNodes())
    if strategy == "sobel":
        return rmsGScore(fmap, pooling)
    return altScores(fmap, strategy, pooling)
