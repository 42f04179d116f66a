"""
Brute-force reference implementations of the GFA block.

Everything here is written with plain Python loops over nodes, candidates and channels
and shares no code with the optimized packages; only the ```FeatureMap``` and
```GfaConfig``` containers are common. The functions are slow and meant for tests and
the ``bench`` command.
"""

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from gfagraph.__logger__ import get_logger
from gfagraph.core.config import GfaConfig
from gfagraph.core.tensor import FeatureMap
from gfagraph.exceptions import ConfigurationError, DomainError

logger = get_logger(__name__)

_SMOOTH = (1.0, 2.0, 1.0)
_BINS = 8
_EPS = 1e-12


class OracleReport:
    """The outcome of comparing the main path against the reference on one case.

    Attributes
    ----------
    caseId : String
        A label of the case.
    maxAbsDeviation : float
        The largest absolute difference between the two outputs.
    checks : dict[String, bool]
        Pass / fail of every checked property.
    counts : dict[String, int]
        Edge and similarity-evaluation totals.
    """

    def __init__(
        self,
        caseId: str,
        maxAbsDeviation: float,
        checks: dict[str, bool],
        counts: dict[str, int],
    ):
        if not maxAbsDeviation >= 0.0:
            logger.error("negative deviation %s in report %s", maxAbsDeviation, caseId)
            raise DomainError(f"A deviation must be nonnegative, got {maxAbsDeviation}.")
        self.caseId = caseId
        self.maxAbsDeviation = float(maxAbsDeviation)
        self.checks = dict(checks)
        self.counts = dict(counts)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def __repr__(self) -> str:
        failed = [name for name, ok in self.checks.items() if not ok]
        return (
            f"OracleReport({self.caseId!r}, max_abs_deviation={self.maxAbsDeviation:.3e}, "
            f"failed={failed})"
        )

    def toDict(self) -> dict:
        return {
            "case_id": self.caseId,
            "max_abs_deviation": self.maxAbsDeviation,
            "checks": self.checks,
            "counts": self.counts,
            "passed": self.passed,
        }


def oracleTopk(sims: ArrayLike, k: int) -> list[int]:
    """
    Return the indices of the ``k`` largest similarities by sorting. Every value equal
    to the ``k``-th largest is included as well, so the result is the set
    ``{j : sims[j] >= kth}``.

    Parameters
    ----------
    sims : ArrayLike
        The similarities of one row.
    k : int
        The number of entries to keep, between 1 and ``len(sims)``.

    Returns
    -------
    list[int]
        The selected indices in increasing order.
    """
    values = [float(s) for s in np.asarray(sims).reshape(-1)]
    if not values:
        logger.error("top-k of an empty row")
        raise DomainError("Cannot select from an empty similarity row.")
    if not 1 <= k <= len(values):
        logger.error("top-k with k=%s of %s values", k, len(values))
        raise DomainError(f"k must lie in [1, {len(values)}], got {k}.")
    kth = sorted(values, reverse=True)[k - 1]
    return [j for j, s in enumerate(values) if s >= kth]


def _pixels(fmap: FeatureMap) -> list:
    return fmap.asArray().tolist()


def _line(pixels: list, u: int, v: int, c: int, points) -> float:
    """(1, 2, 1)-weighted sum of three window pixels, window offsets clamped to the map."""
    height, width = len(pixels), len(pixels[0])
    total = 0.0
    for weight, (a, b) in zip(_SMOOTH, points):
        uu = min(max(u + a - 1, 0), height - 1)
        vv = min(max(v + b - 1, 0), width - 1)
        total += weight * pixels[uu][vv][c]
    return total


def oracleSobel(fmap: FeatureMap) -> tuple[NDArray, NDArray]:
    """Sobel correlation with clamped (edge-replicated) borders, one pixel at a time."""
    height, width, channels = fmap.getShape()
    pixels = _pixels(fmap)
    gx = np.zeros((height, width, channels))
    gy = np.zeros((height, width, channels))
    for u in range(height):
        for v in range(width):
            for c in range(channels):
                right = _line(pixels, u, v, c, ((0, 2), (1, 2), (2, 2)))
                left = _line(pixels, u, v, c, ((0, 0), (1, 0), (2, 0)))
                bottom = _line(pixels, u, v, c, ((2, 0), (2, 1), (2, 2)))
                top = _line(pixels, u, v, c, ((0, 0), (0, 1), (0, 2)))
                gx[u, v, c] = right - left
                gy[u, v, c] = bottom - top
    return gx, gy


def _checkPooling(pooling: str) -> None:
    if pooling not in ("rms", "mean"):
        logger.error("unknown pooling %s", pooling)
        raise ConfigurationError(f"Unknown pooling {pooling!r}.")


def _pool(values: list[float], pooling: str) -> float:
    if pooling == "rms":
        return math.sqrt(sum(x * x for x in values) / len(values))
    return sum(values) / len(values)


def oracleRmsGScore(fmap: FeatureMap, pooling: str = "rms") -> NDArray:
    """The RMS-G score of every node from ```oracleSobel```."""
    _checkPooling(pooling)
    height, width, channels = fmap.getShape()
    gx, gy = oracleSobel(fmap)
    scores = np.zeros(height * width)
    for u in range(height):
        for v in range(width):
            squares = [gx[u, v, c] ** 2 + gy[u, v, c] ** 2 for c in range(channels)]
            if pooling == "rms":
                scores[u * width + v] = math.sqrt(sum(squares) / channels)
            else:
                scores[u * width + v] = sum(math.sqrt(s) for s in squares) / channels
    return scores


def oracleRescalingResidual(fmap: FeatureMap, pooling: str = "rms") -> NDArray:
    _checkPooling(pooling)
    height, width, channels = fmap.getShape()
    pixels = _pixels(fmap)
    scores = np.zeros(height * width)
    for u in range(height):
        for v in range(width):
            residual = []
            for c in range(channels):
                # the 2x2 block holding (u, v), clamped at odd borders
                top, left = u - u % 2, v - v % 2
                block = [
                    pixels[min(top + a, height - 1)][min(left + b, width - 1)][c]
                    for a in range(2)
                    for b in range(2)
                ]
                mean = ((block[0] + block[1]) + (block[2] + block[3])) / 4.0
                residual.append(abs(pixels[u][v][c] - mean))
            scores[u * width + v] = _pool(residual, pooling)
    return scores


def oracleLocalEntropy(fmap: FeatureMap, pooling: str = "rms") -> NDArray:
    _checkPooling(pooling)
    height, width, _ = fmap.getShape()
    pixels = _pixels(fmap)
    pooled = [[_pool(pixels[u][v], pooling) for v in range(width)] for u in range(height)]
    low = min(min(row) for row in pooled)
    high = max(max(row) for row in pooled)
    scores = np.zeros(height * width)
    if not high > low:
        return scores
    bins = [
        [min(max(math.floor((p - low) / (high - low) * _BINS), 0), _BINS - 1) for p in row]
        for row in pooled
    ]
    for u in range(height):
        for v in range(width):
            counts = [0] * _BINS
            for a in (-1, 0, 1):
                for b in (-1, 0, 1):
                    uu = min(max(u + a, 0), height - 1)
                    vv = min(max(v + b, 0), width - 1)
                    counts[bins[uu][vv]] += 1
            entropy = 0.0
            for count in counts:
                if count:
                    p = count / 9.0
                    entropy -= p * math.log2(p)
            scores[u * width + v] = entropy
    return scores


def oracleScores(fmap: FeatureMap, strategy: str, pooling: str = "rms") -> NDArray:
    if strategy == "none":
        _checkPooling(pooling)
        return np.zeros(fmap.getNumberNodes())
    if strategy == "sobel":
        return oracleRmsGScore(fmap, pooling)
    if strategy == "rescaling-residual":
        return oracleRescalingResidual(fmap, pooling)
    if strategy == "local-entropy":
        return oracleLocalEntropy(fmap, pooling)
    logger.error("unknown scoring strategy %s", strategy)
    raise ConfigurationError(f"Unknown scoring strategy {strategy!r}.")


def oracleCandidates(
    i: int, shape: tuple[int, int], L: int, G: int, mode: str = "both"
) -> list[int]:
    """
    Enumerate the candidates of node ``i`` as the union of the in-bounds window cells
    and the in-bounds lattice points.
    """
    height, width = shape
    if mode not in ("local-only", "global-only", "both"):
        logger.error("unknown candidate mode %s", mode)
        raise ConfigurationError(f"Unknown candidate mode {mode!r}.")
    if not 0 <= i < height * width:
        logger.error("node %s outside shape %s", i, shape)
        raise IndexError(f"Node {i} is outside the shape {shape}.")
    u, v = divmod(i, width)
    found = set()
    if mode in ("local-only", "both"):
        for du in range(-(L // 2), (L + 1) // 2):
            for dv in range(-(L // 2), (L + 1) // 2):
                if 0 <= u + du < height and 0 <= v + dv < width:
                    found.add((u + du) * width + v + dv)
    if mode in ("global-only", "both"):
        strideH, strideW = height // G, width // G
        if strideH < 1 or strideW < 1:
            logger.error("grid size %s too large for shape %s", G, shape)
            raise ConfigurationError(f"The grid size G={G} is too large for {shape}.")
        for a in range(G):
            for b in range(G):
                uu = u % strideH + a * strideH
                vv = v % strideW + b * strideW
                if uu < height and vv < width:
                    found.add(uu * width + vv)
    return sorted(found)


def oracleQuotas(scores: ArrayLike, avgDegree: int, candidateSizes: list[int]) -> list[int]:
    """Target degrees ``clip(round(B * s_i / sum s), 1, n_i)`` with halves rounded up."""
    values = [float(s) for s in np.asarray(scores).reshape(-1)]
    budget = float(len(values) * avgDegree)
    total = sum(values)
    targets = []
    for s, n in zip(values, candidateSizes):
        weight = s / total if total > 0 else 1.0 / len(values)
        q = budget * weight
        targets.append(min(max(int(math.floor(q + 0.5)), 1), n))
    return targets


def _unit(vector: list[float]) -> list[float]:
    norm = math.sqrt(sum(x * x for x in vector))
    if norm < _EPS:
        return [0.0] * len(vector)
    return [x / norm for x in vector]


def oracleThreshold(sims: list[float], dStar: int, iterations: int) -> float:
    """The bisection threshold of one row in Python floats."""
    lower = min(sims)
    upper = max(sims)
    theta = sum(sims) / len(sims)
    for _ in range(iterations):
        selected = sum(1 for s in sims if s >= theta)
        if selected > dStar:
            lower = theta
        else:
            upper = theta
        theta = 0.5 * (lower + upper)
    if dStar >= len(sims):
        theta = min(sims)
    theta = min(theta, max(sims))
    return min(s for s in sims if s >= theta)


def oracleGraph(fmap: FeatureMap, cfg: GfaConfig, mode: str) -> list[tuple[list[int], list[float]]]:
    """
    Select the neighbors of every node for one candidate mode.

    Returns
    -------
    list[tuple[list[int], list[float]]]
        Per node, the neighbor indices and their (float32-rounded) similarities.
    """
    height, width, _ = fmap.getShape()
    shape = (height, width)
    rows = [vec for row in _pixels(fmap) for vec in row]
    unit = [_unit(vec) for vec in rows]
    candidates = [
        oracleCandidates(i, shape, cfg.localWindow, cfg.gridSize, mode)
        for i in range(height * width)
    ]
    scores = oracleScores(fmap, cfg.strategy, cfg.pooling)
    targets = oracleQuotas(scores, cfg.avgDegree, [len(c) for c in candidates])
    result = []
    for i, cand in enumerate(candidates):
        sims = []
        for j in cand:
            dot = sum(a * b for a, b in zip(unit[i], unit[j]))
            sims.append(float(np.float32(min(max(dot, -1.0), 1.0))))
        theta = oracleThreshold(sims, targets[i], cfg.iterations)
        chosen = [k for k, s in enumerate(sims) if s >= theta]
        result.append(([cand[k] for k in chosen], [sims[k] for k in chosen]))
    return result


def _matrix(weight, inChannels: int, outChannels: int, seed) -> list[list[float]]:
    if weight is None:
        rng = np.random.default_rng(seed)
        drawn = rng.uniform(-1.0, 1.0, size=(inChannels, outChannels))
        return (drawn / np.sqrt(inChannels)).tolist()
    return np.asarray(getattr(weight, "matrix", weight), dtype=np.float64).tolist()


def _oracleBlock(
    fmap: FeatureMap,
    cfg: GfaConfig,
    weights: list | None,
    channels: int | None,
    stage: int,
    block: int,
) -> tuple[FeatureMap, dict[str, int]]:
    kinds = cfg.passKinds()
    weights = [None] * len(kinds) if weights is None else list(weights)
    if len(weights) != len(kinds):
        logger.error("%s projections for %s passes", len(weights), len(kinds))
        raise ConfigurationError(f"Expected {len(kinds)} projections, got {len(weights)}.")
    outChannels = fmap.channels if channels is None else channels
    current = fmap
    counts = {"edges_total": 0, "similarity_evaluations": 0}
    for index, kind in enumerate(kinds):
        height, width, inChannels = current.getShape()
        mode = "local-only" if kind == "local" else "global-only"
        graph = oracleGraph(current, cfg, mode)
        matrix = _matrix(weights[index], inChannels, outChannels, (cfg.seed, stage, block, index))
        if len(matrix) != inChannels:
            logger.error("projection with %s rows for %s channels", len(matrix), inChannels)
            raise ConfigurationError(
                f"The projection expects {len(matrix)} input channels, the map has {inChannels}."
            )
        outWidth = len(matrix[0])
        rows = [vec for row in _pixels(current) for vec in row]
        out = []
        for i, (neighbors, sims) in enumerate(graph):
            top = max(sims)
            exps = [math.exp(s - top) for s in sims]
            total = sum(exps)
            z = [0.0] * outWidth
            for j, e in zip(neighbors, exps):
                alpha = e / total
                for c in range(outWidth):
                    z[c] += alpha * sum(rows[j][k] * matrix[k][c] for k in range(inChannels))
            if outWidth == inChannels:
                z = [a + b for a, b in zip(z, rows[i])]
            out.append(z)
            counts["edges_total"] += len(neighbors)
        counts["similarity_evaluations"] += sum(
            len(oracleCandidates(i, (height, width), cfg.localWindow, cfg.gridSize, mode))
            for i in range(height * width)
        )
        current = FeatureMap(height, width, outWidth, np.array(out).reshape(-1))
    return current, counts


def oracleAggregate(
    fmap: FeatureMap,
    cfg: GfaConfig,
    weights: list | None = None,
    channels: int | None = None,
    stage: int = 0,
    block: int = 0,
) -> FeatureMap:
    """
    Run one GFA block by direct transcription of its formulas.

    Parameters
    ----------
    fmap : gfagraph.core.tensor.FeatureMap
        The input features.
    cfg : gfagraph.core.config.GfaConfig
        The hyperparameters.
    weights : list | None
        One ``C_in x C_out`` matrix (or object with a ``matrix`` attribute) per pass;
        ``None`` entries are drawn from the seed ``(cfg.seed, stage, block, pass)``.
    channels : int | None
        The output width; the input width by default.
    stage : int
        The stage index used for seeding.
    block : int
        The block index used for seeding.

    Returns
    -------
    FeatureMap : gfagraph.core.tensor.FeatureMap
        The block output.
    """
    output, _ = _oracleBlock(fmap, cfg, weights, channels, stage, block)
    return output


def countEdges(graph, avgDegree: int, L: int, G: int) -> dict:
    """
    Count the edges and candidates of a built graph.

    Parameters
    ----------
    graph : gfagraph.graph.construction.DirectedGraph
        The graph.
    avgDegree : int
        The target average degree.
    L : int
        The local window side.
    G : int
        The global grid side.

    Returns
    -------
    dict
        ``edges_total`` (sum of the degrees), ``candidates_total`` (sum of the candidate set
        sizes), ``budget_ratio`` (edges over ``N * avgDegree``) and ``candidate_bound_ratio``
        (candidates over ``N * (L^2 + G^2)``).
    """
    degrees = [int(m) for m in graph.getDegrees()]
    sizes = [int(n) for n in graph.candidates.counts]
    numberNodes = len(degrees)
    edges = sum(degrees)
    candidates = sum(sizes)
    return {
        "edges_total": edges,
        "candidates_total": candidates,
        "budget_ratio": edges / (numberNodes * avgDegree),
        "candidate_bound_ratio": candidates / (numberNodes * (L * L + G * G)),
    }


def compareAggregate(
    fmap: FeatureMap,
    cfg: GfaConfig,
    weights: list | None = None,
    caseId: str = "case",
    tolerance: float = 1e-5,
) -> OracleReport:
    """
    Compare ```gfaBlockWithStats``` with ```oracleAggregate``` on one input.

    The report checks the output deviation against ``tolerance`` and that both paths
    select the same number of edges and evaluate the same number of similarities.
    """
    from gfagraph.aggregate.pipeline import gfaBlockWithStats

    output, passStats = gfaBlockWithStats(fmap, cfg, weights)
    expected, counts = _oracleBlock(fmap, cfg, weights, None, 0, 0)
    deviation = float(np.max(np.abs(output.asArray() - expected.asArray())))
    edges = sum(p.edgesTotal for p in passStats)
    evaluations = sum(p.similarityEvaluations for p in passStats)
    report = OracleReport(
        caseId,
        deviation,
        {
            "output_within_tolerance": deviation <= tolerance,
            "edges_match": edges == counts["edges_total"],
            "similarity_evaluations_match": evaluations == counts["similarity_evaluations"],
        },
        {"edges_total": edges, "similarity_evaluations": evaluations},
    )
    logger.info("%s", report)
    return report
