import numpy as np
from numpy.typing import ArrayLike, NDArray

from gfagraph.__logger__ import get_logger
from gfagraph.core.tensor import FeatureMap, nodeToCoord
from gfagraph.exceptions import ConfigurationError, DomainError
from gfagraph.sampling.candidates import CandidateSet, CandidateTable
from gfagraph.utils.helpers import mapRowChunks

logger = get_logger(__name__)

# feature vectors with a smaller norm have zero similarity to everything
NORM_EPS = 1e-12

THETA_QUANTILES = (0.0, 0.25, 0.5, 0.75, 1.0)


def _unitRows(matrix: NDArray) -> NDArray:
    norms = np.sqrt(np.sum(matrix * matrix, axis=1))
    unit = np.zeros_like(matrix, dtype=np.float64)
    safe = norms >= NORM_EPS
    unit[safe] = matrix[safe] / norms[safe, None]
    return unit


def _cosineRows(unit: NDArray, owners: NDArray, indices: NDArray) -> NDArray:
    valid = indices >= 0
    gathered = unit[np.where(valid, indices, 0)]
    sims = np.sum(gathered * unit[owners][:, None, :], axis=2)
    sims = np.clip(sims, -1.0, 1.0).astype(np.float32)
    sims[~valid] = 0.0
    return sims


def _bisectRows(
    sims: NDArray,
    valid: NDArray,
    targets: NDArray,
    iterations: int,
    trace: list | None = None,
) -> tuple[NDArray, NDArray]:
    values = sims.astype(np.float64)
    counts = np.sum(valid, axis=1)
    minimum = np.min(np.where(valid, values, np.inf), axis=1)
    maximum = np.max(np.where(valid, values, -np.inf), axis=1)
    lower = minimum.copy()
    upper = maximum.copy()
    theta = np.sum(np.where(valid, values, 0.0), axis=1) / counts

    for _ in range(iterations):
        selected = np.sum(valid & (values >= theta[:, None]), axis=1)
        tooMany = selected > targets
        lower = np.where(tooMany, theta, lower)
        upper = np.where(tooMany, upper, theta)
        if trace is not None:
            trace.append((lower.copy(), upper.copy()))
        theta = 0.5 * (lower + upper)

    # keep-all targets cannot be reached from inside the interval
    theta = np.where(targets >= counts, minimum, theta)
    # a threshold above every similarity would select nothing
    theta = np.minimum(theta, maximum)
    selected = valid & (values >= theta[:, None])
    # the smallest selected similarity is a float32 value selecting the same set
    theta = np.min(np.where(selected, values, np.inf), axis=1)
    return theta, selected


class SimilarityRow:
    """The cosine similarities between a node and its candidates.

    ``sims[k]`` is the similarity between the owner and ``candidates[k]``, stored as
    float32 values in ``[-1, 1]``.
    """

    def __init__(self, owner: int, candidates: NDArray, sims: NDArray):
        self.owner = int(owner)
        self.candidates = np.asarray(candidates, dtype=np.int64)
        self.sims = np.asarray(sims, dtype=np.float32)
        if self.candidates.shape != self.sims.shape:
            logger.error("similarity row with mismatching lengths")
            raise DomainError(
                f"{self.candidates.size} candidates but {self.sims.size} similarities."
            )

    def __repr__(self) -> str:
        return f"SimilarityRow(owner={self.owner}, n={self.candidates.size})"

    def __len__(self) -> int:
        return int(self.candidates.size)


def cosineRow(fmap: FeatureMap, candidates: CandidateSet) -> SimilarityRow:
    """
    Compute the cosine similarities between a node and its candidates.

    Parameters
    ----------
    fmap : gfagraph.core.tensor.FeatureMap
        The feature map.
    candidates : gfagraph.sampling.candidates.CandidateSet
        The candidates of the owner node.

    Returns
    -------
    SimilarityRow : gfagraph.graph.construction.SimilarityRow
        Similarities aligned with ``candidates.merged``. Pairs involving a vector with
        norm below ```NORM_EPS``` have similarity 0.
    """
    if candidates.n == 0:
        logger.error("empty candidate set for node %s", candidates.owner)
        raise DomainError(f"Node {candidates.owner} has no candidates.")
    nodeToCoord(candidates.owner, fmap.getSpatialShape())
    unit = _unitRows(fmap.asMatrix())
    sims = _cosineRows(
        unit, np.array([candidates.owner]), candidates.merged[None, :]
    )
    return SimilarityRow(candidates.owner, candidates.merged, sims[0])


def _checkIterations(iterations: int) -> None:
    if isinstance(iterations, bool) or int(iterations) != iterations or iterations < 1:
        logger.error("invalid number of bisection iterations %s", iterations)
        raise ConfigurationError(
            f"The number of bisection iterations must be >= 1, got {iterations}."
        )


def _checkRow(row: SimilarityRow, dStar: int) -> None:
    if len(row) == 0:
        logger.error("empty similarity row for node %s", row.owner)
        raise DomainError(f"Node {row.owner} has an empty similarity row.")
    if not 1 <= dStar <= len(row):
        logger.error("target degree %s outside [1, %s]", dStar, len(row))
        raise DomainError(
            f"The target degree {dStar} must lie in [1, {len(row)}]."
        )


def bisectThreshold(
    row: SimilarityRow, dStar: int, iterations: int = 5
) -> tuple[float, NDArray, int]:
    """
    Search the similarity threshold of one node by a fixed number of bisection steps.

    The search starts from the interval ``[min S, max S]`` and the mean similarity. A
    step counts the candidates with ``S >= theta``; if there are more than ``dStar`` the
    lower bound moves up to ``theta``, otherwise the upper bound moves down, and
    ``theta`` becomes the interval midpoint. Afterwards ``theta`` is set to ``min S`` if
    the target keeps every candidate and is clamped to ``max S`` so that at least one
    neighbor is selected. Ties at ``theta`` are all selected. The returned ``theta`` is
    the smallest selected similarity, so ``S >= theta`` reproduces the neighbors exactly
    in float32 as well as in float64.

    Parameters
    ----------
    row : gfagraph.graph.construction.SimilarityRow
        The similarities of the node.
    dStar : int
        The target degree, between 1 and the number of candidates.
    iterations : int
        The number ``T`` of bisection steps. There is no early exit.

    Returns
    -------
    (theta, neighbors, degree) : tuple[float, NDArray, int]
        The final threshold, the selected candidate node indices and their number.
    """
    _checkRow(row, dStar)
    _checkIterations(iterations)
    theta, selected = _bisectRows(
        row.sims[None, :],
        np.ones((1, len(row)), dtype=bool),
        np.array([dStar]),
        iterations,
    )
    neighbors = row.candidates[selected[0]]
    return float(theta[0]), neighbors, int(neighbors.size)


def bisectionTrace(
    row: SimilarityRow, dStar: int, iterations: int = 5
) -> list[tuple[float, float]]:
    """
    Return the search interval ``(lower, upper)`` after every bisection step of
    ```bisectThreshold```.
    """
    _checkRow(row, dStar)
    _checkIterations(iterations)
    trace: list = []
    _bisectRows(
        row.sims[None, :],
        np.ones((1, len(row)), dtype=bool),
        np.array([dStar]),
        iterations,
        trace,
    )
    return [(float(lower[0]), float(upper[0])) for lower, upper in trace]


class DirectedGraph:
    """A directed graph selected from candidate sets by per-node similarity thresholds.

    Node ``i`` receives messages from its neighbors ``N_i``, a subset of its candidates.
    Row ``i`` of ``sims`` and ``selected`` is aligned with row ``i`` of the candidate
    table; ``selected[i, k]`` holds exactly when ``sims[i, k] >= thetas[i]``.

    Attributes
    ----------
    candidates : CandidateTable
        The candidate lists.
    sims : NDArray
        float32 cosine similarities, ``(N, width)``; padding entries are 0.
    selected : NDArray
        Boolean selection mask, ``(N, width)``.
    thetas : NDArray
        The final thresholds ``theta_i``.
    degrees : NDArray
        The realized degrees ``m_i = |N_i|``.
    targets : NDArray
        The target degrees ``d*_i``.
    similarityEvaluations : int
        The number of similarities computed while building the graph.
    """

    def __init__(
        self,
        candidates: CandidateTable,
        sims: NDArray,
        selected: NDArray,
        thetas: NDArray,
        targets: NDArray,
        similarityEvaluations: int,
    ):
        self.candidates = candidates
        self.sims = sims
        self.selected = selected
        self.thetas = thetas
        self.targets = targets
        self.degrees = np.sum(selected, axis=1).astype(np.int64)
        self.similarityEvaluations = int(similarityEvaluations)

    def __repr__(self) -> str:
        return (
            f"DirectedGraph(nodes={self.getNumberNodes()}, edges={self.getEdgesTotal()})"
        )

    def getNumberNodes(self) -> int:
        return self.candidates.getNumberNodes()

    def getNeighbors(self, i: int) -> NDArray:
        """Return the sorted neighbor node indices of node ``i``."""
        nodeToCoord(i, self.candidates.shape)
        return self.candidates.indices[i][self.selected[i]].copy()

    def getNeighborSims(self, i: int) -> NDArray:
        """Return the similarities of node ``i`` to its neighbors, aligned with ```getNeighbors```."""
        nodeToCoord(i, self.candidates.shape)
        return self.sims[i][self.selected[i]].copy()

    def getSimilarityRow(self, i: int) -> SimilarityRow:
        nodeToCoord(i, self.candidates.shape)
        count = self.candidates.counts[i]
        return SimilarityRow(
            i, self.candidates.indices[i, :count], self.sims[i, :count]
        )

    def getDegrees(self) -> NDArray:
        return self.degrees

    def getEdgesTotal(self) -> int:
        return int(self.degrees.sum())

    def getMeanAbsDeviation(self) -> float:
        """Return the mean of ``|m_i - d*_i|`` over all nodes."""
        return float(np.mean(np.abs(self.degrees - self.targets)))

    def stats(self) -> dict:
        """Return the summary written by the ``graph --stats`` command."""
        return graphStats(self)


def buildGraph(
    fmap: FeatureMap,
    candidates: CandidateTable | list[CandidateSet],
    targets: ArrayLike,
    iterations: int = 5,
    threads: int = 1,
) -> DirectedGraph:
    """
    Build the directed graph of a feature map. Every node computes the cosine
    similarities to its candidates and selects its neighbors with ```bisectThreshold```.

    Nodes are processed independently in row chunks, optionally on a thread pool; the
    chunks are gathered by node index, so the result does not depend on ``threads``.

    Parameters
    ----------
    fmap : gfagraph.core.tensor.FeatureMap
        The feature map.
    candidates : CandidateTable | list[CandidateSet]
        The candidates of every node.
    targets : ArrayLike
        The target degree of every node.
    iterations : int
        The number ``T`` of bisection steps.
    threads : int
        The number of worker threads.

    Returns
    -------
    DirectedGraph : gfagraph.graph.construction.DirectedGraph
        The graph.
    """
    shape = fmap.getSpatialShape()
    if not isinstance(candidates, CandidateTable):
        candidates = CandidateTable.fromCandidateSets(shape, candidates)
    if candidates.shape != shape:
        logger.error("candidate table %s does not match map %s", candidates.shape, shape)
        raise ConfigurationError(
            f"The candidate table has shape {candidates.shape}, the map {shape}."
        )
    _checkIterations(iterations)
    targets = np.asarray(targets, dtype=np.int64).reshape(-1)
    if targets.size != candidates.getNumberNodes():
        logger.error("%s targets for %s nodes", targets.size, candidates.getNumberNodes())
        raise DomainError(
            f"Expected {candidates.getNumberNodes()} target degrees, got {targets.size}."
        )
    if np.any(targets < 1) or np.any(targets > candidates.counts):
        logger.error("target degrees outside [1, n_i]")
        raise DomainError("Every target degree must lie in [1, n_i].")

    unit = _unitRows(fmap.asMatrix())
    width = candidates.getWidth()

    def work(start: int, stop: int):
        indices = candidates.indices[start:stop]
        valid = indices >= 0
        sims = _cosineRows(unit, np.arange(start, stop), indices)
        thetas, selected = _bisectRows(sims, valid, targets[start:stop], iterations)
        return sims, selected, thetas, int(np.sum(valid))

    logger.info(
        "building graph on %s nodes, %s candidates, T=%s",
        candidates.getNumberNodes(),
        candidates.getTotal(),
        iterations,
    )
    chunks = mapRowChunks(
        work, candidates.getNumberNodes(), width * fmap.channels, threads
    )
    graph = DirectedGraph(
        candidates,
        np.concatenate([c[0] for c in chunks]),
        np.concatenate([c[1] for c in chunks]),
        np.concatenate([c[2] for c in chunks]),
        targets,
        sum(c[3] for c in chunks),
    )
    logger.debug(
        "graph built: edges=%s mean |m-d*|=%.4f",
        graph.getEdgesTotal(),
        graph.getMeanAbsDeviation(),
    )
    return graph


def graphStats(graph: DirectedGraph) -> dict:
    """
    Summarize a graph.

    Returns
    -------
    dict
        ``mean_degree``, ``degree_hist`` (entry ``k`` counts the nodes of degree ``k``),
        ``mean_abs_deviation``, ``edges_total`` and ``theta_quantiles`` at
        ```THETA_QUANTILES```.
    """
    degrees = graph.getDegrees()
    return {
        "mean_degree": float(np.mean(degrees)),
        "degree_hist": np.bincount(degrees).astype(int).tolist(),
        "mean_abs_deviation": graph.getMeanAbsDeviation(),
        "edges_total": graph.getEdgesTotal(),
        "theta_quantiles": [
            float(q) for q in np.quantile(graph.thetas, THETA_QUANTILES)
        ],
    }
