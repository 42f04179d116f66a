import numpy as np
from numpy.typing import ArrayLike, NDArray

from gfagraph.__logger__ import get_logger
from gfagraph.exceptions import ConfigurationError, DomainError
from gfagraph.utils.helpers import roundHalfAway

logger = get_logger(__name__)


class ComplexityScores:
    """Per-node complexity scores and the degree budget derived from them.

    Attributes
    ----------
    scores : NDArray
        Nonnegative scores ``s_i``.
    weights : NDArray
        Normalized weights ``w_i``, summing to one.
    quotas : NDArray
        Real-valued quotas ``q_i = B * w_i``.
    targets : NDArray
        Integer target degrees ``d*_i`` with ``1 <= d*_i <= n_i``.
    budget : float
        The total edge budget ``B = N * avgDegree``.
    """

    def __init__(
        self,
        scores: NDArray,
        weights: NDArray,
        quotas: NDArray,
        targets: NDArray,
        budget: float,
    ):
        self.scores = scores
        self.weights = weights
        self.quotas = quotas
        self.targets = targets
        self.budget = budget

    def __repr__(self) -> str:
        return (
            f"ComplexityScores(nodes={self.scores.size}, budget={self.budget}, "
            f"targets_total={int(self.targets.sum())})"
        )


def allocateQuotas(
    scores: ArrayLike, avgDegree: int, candidateSizes: ArrayLike
) -> ComplexityScores:
    """
    Split the edge budget ``B = N * avgDegree`` over the nodes in proportion to their scores.

    The target degree of node ``i`` is ``clip(round(q_i), 1, n_i)`` with halves rounded away
    from zero. The targets are not renormalized after clipping, so their sum may differ
    from ``B``. If all scores are zero every node receives the same weight ``1 / N``.

    Parameters
    ----------
    scores : ArrayLike
        ``N`` nonnegative scores.
    avgDegree : int
        The target average in-degree.
    candidateSizes : ArrayLike
        ``N`` candidate set sizes ``n_i >= 1``.

    Returns
    -------
    ComplexityScores : gfagraph.complexity.quotas.ComplexityScores
        Scores, weights, quotas and target degrees.
    """
    if isinstance(avgDegree, bool) or avgDegree < 1:
        logger.error("invalid average degree %s", avgDegree)
        raise ConfigurationError(f"The average degree must be >= 1, got {avgDegree}.")
    s = np.asarray(scores, dtype=np.float64).reshape(-1)
    sizes = np.asarray(candidateSizes, dtype=np.int64).reshape(-1)
    if s.size == 0:
        logger.error("empty score vector")
        raise DomainError("At least one score is required.")
    if sizes.size != s.size:
        logger.error("%s scores but %s candidate sizes", s.size, sizes.size)
        raise DomainError(
            f"Got {s.size} scores but {sizes.size} candidate set sizes."
        )
    if not np.all(np.isfinite(s)) or np.any(s < 0):
        logger.error("scores must be finite and nonnegative")
        raise DomainError("Complexity scores must be finite and nonnegative.")
    if np.any(sizes < 1):
        logger.error("candidate sets must not be empty")
        raise DomainError("Every node needs at least one candidate.")

    numberNodes = s.size
    budget = float(numberNodes * avgDegree)
    total = float(np.sum(s))
    if total > 0:
        weights = s / total
    else:
        logger.debug("all scores zero, falling back to uniform weights")
        weights = np.full(numberNodes, 1.0 / numberNodes)
    quotas = budget * weights
    targets = np.clip(roundHalfAway(quotas), 1, sizes).astype(np.int64)
    return ComplexityScores(s, weights, quotas, targets, budget)
