import numpy as np
from numpy.typing import ArrayLike, NDArray

from gfagraph.__logger__ import get_logger
from gfagraph.core.tensor import FeatureMap
from gfagraph.exceptions import ConfigurationError, DomainError
from gfagraph.graph.construction import DirectedGraph
from gfagraph.io.formats import readTensor
from gfagraph.utils.helpers import mapRowChunks

logger = get_logger(__name__)


class ProjectionWeights:
    """The linear projection ``phi(x) = W^T x`` applied to neighbor features.

    ``matrix`` has shape ``(C_in, C_out)``. The weights are fixed inputs: they are either
    drawn from a seeded uniform distribution, read from an FTEN file or given directly.
    """

    def __init__(
        self,
        matrix: ArrayLike,
        source: str = "array",
        seed=None,
        path: str | None = None,
    ):
        """
        Parameters
        ----------
        matrix : ArrayLike
            A ``C_in x C_out`` matrix of finite values.
        source : String
            ``"seeded-random"``, ``"file"``, ``"identity"`` or ``"array"``.
        seed : int | tuple[int, ...] | None
            The seed, for seeded weights.
        path : String | None
            The file, for weights read from disk.
        """
        values = np.array(matrix, dtype=np.float64)
        if values.ndim != 2 or min(values.shape) < 1:
            logger.error("projection matrix with shape %s", values.shape)
            raise ConfigurationError(
                f"A projection matrix must have shape (C_in, C_out), got {values.shape}."
            )
        if not np.all(np.isfinite(values)):
            logger.error("projection matrix with non-finite entries")
            raise DomainError("Projection weights must be finite.")
        values.flags.writeable = False
        self.matrix = values
        self.source = source
        self.seed = seed
        self.path = path

    @classmethod
    def seeded(cls, inChannels: int, outChannels: int, seed) -> "ProjectionWeights":
        """
        Draw weights uniformly from ``[-1, 1)`` and scale them by ``1 / sqrt(C_in)``.

        Parameters
        ----------
        inChannels : int
            ``C_in``.
        outChannels : int
            ``C_out``.
        seed : int | tuple[int, ...]
            Anything accepted by ``numpy.random.default_rng``.
        """
        rng = np.random.default_rng(seed)
        matrix = rng.uniform(-1.0, 1.0, size=(inChannels, outChannels))
        return cls(matrix / np.sqrt(inChannels), source="seeded-random", seed=seed)

    @classmethod
    def identity(cls, channels: int) -> "ProjectionWeights":
        return cls(np.eye(channels), source="identity")

    @classmethod
    def fromFile(cls, path: str) -> "ProjectionWeights":
        """Read weights from an FTEN tensor with ``H = C_in``, ``W = C_out`` and ``C = 1``."""
        tensor = readTensor(path)
        if tensor.channels != 1:
            logger.error("weight file %s has %s channels", path, tensor.channels)
            raise ConfigurationError(
                f"A weight file must have C = 1, got C = {tensor.channels}."
            )
        return cls(tensor.asArray()[:, :, 0], source="file", path=str(path))

    def __repr__(self) -> str:
        return (
            f"ProjectionWeights({self.getInChannels()}, {self.getOutChannels()}, "
            f"source={self.source!r})"
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectionWeights):
            return False
        return np.array_equal(self.matrix, other.matrix)

    def getInChannels(self) -> int:
        return self.matrix.shape[0]

    def getOutChannels(self) -> int:
        return self.matrix.shape[1]

    def apply(self, features: NDArray) -> NDArray:
        """Project an ``(N, C_in)`` feature matrix to ``(N, C_out)``."""
        return features @ self.matrix


def _softmaxRows(sims: NDArray, mask: NDArray) -> NDArray:
    values = sims.astype(np.float64)
    shift = np.max(np.where(mask, values, -np.inf), axis=1, keepdims=True)
    exps = np.where(mask, np.exp(np.where(mask, values - shift, 0.0)), 0.0)
    return exps / np.sum(exps, axis=1, keepdims=True)


def attentionWeights(sims: ArrayLike) -> NDArray:
    """
    Turn the similarities of a node to its neighbors into aggregation weights
    ``alpha_j = exp(S_j) / sum_u exp(S_u)``.

    Parameters
    ----------
    sims : ArrayLike
        The similarities to the selected neighbors.

    Returns
    -------
    NDArray
        Nonnegative weights summing to one.
    """
    values = np.asarray(sims, dtype=np.float64).reshape(1, -1)
    if values.size == 0:
        logger.error("attention weights requested for an empty neighbor set")
        raise DomainError("A node needs at least one neighbor.")
    return _softmaxRows(values, np.ones_like(values, dtype=bool))[0]


def attentionTable(graph: DirectedGraph) -> NDArray:
    """Return the aggregation weights of every node, aligned with ``graph.sims``; unselected entries are 0."""
    return _softmaxRows(graph.sims, graph.selected)


def aggregateArray(
    fmap: FeatureMap,
    graph: DirectedGraph,
    weights: ProjectionWeights,
    threads: int = 1,
) -> NDArray:
    """
    Aggregate projected neighbor features with softmax weights over the cosine similarities:
    ``z_i = sum_{j in N_i} alpha_{i<-j} W^T x_j``.

    No residual connection or normalization is added here.

    Parameters
    ----------
    fmap : gfagraph.core.tensor.FeatureMap
        The input features; the graph must have been built on this map.
    graph : gfagraph.graph.construction.DirectedGraph
        The graph.
    weights : ProjectionWeights
        The projection with ``C_in`` equal to the number of input channels.
    threads : int
        The number of worker threads.

    Returns
    -------
    NDArray
        The float64 ``(H, W, C_out)`` aggregate, before rounding to a ```FeatureMap```.
    """
    if graph.candidates.shape != fmap.getSpatialShape():
        logger.error(
            "graph on %s does not match map %s",
            graph.candidates.shape,
            fmap.getSpatialShape(),
        )
        raise ConfigurationError(
            f"The graph was built on shape {graph.candidates.shape}, "
            f"the map has shape {fmap.getSpatialShape()}."
        )
    if weights.getInChannels() != fmap.channels:
        logger.error(
            "projection expects %s channels, map has %s",
            weights.getInChannels(),
            fmap.channels,
        )
        raise ConfigurationError(
            f"The projection expects {weights.getInChannels()} input channels, "
            f"the map has {fmap.channels}."
        )

    projected = weights.apply(fmap.asMatrix())
    outChannels = weights.getOutChannels()

    def work(start: int, stop: int) -> NDArray:
        indices = graph.candidates.indices[start:stop]
        alpha = _softmaxRows(graph.sims[start:stop], graph.selected[start:stop])
        gathered = projected[np.where(indices >= 0, indices, 0)]
        return np.sum(alpha[:, :, None] * gathered, axis=1)

    rows = mapRowChunks(
        work,
        graph.getNumberNodes(),
        graph.candidates.getWidth() * outChannels,
        threads,
    )
    height, width = fmap.getSpatialShape()
    return np.concatenate(rows).reshape(height, width, outChannels)


def aggregatePass(
    fmap: FeatureMap,
    graph: DirectedGraph,
    weights: ProjectionWeights,
    threads: int = 1,
) -> FeatureMap:
    """Run ```aggregateArray``` and return the result as a ``C_out``-channel ```FeatureMap```."""
    return FeatureMap.fromArray(aggregateArray(fmap, graph, weights, threads))
