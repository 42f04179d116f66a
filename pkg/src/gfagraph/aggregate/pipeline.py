import numpy as np

from gfagraph.__logger__ import get_logger
from gfagraph.aggregate.aggregation import ProjectionWeights, aggregateArray
from gfagraph.complexity.quotas import allocateQuotas
from gfagraph.complexity.scoring import computeScores
from gfagraph.core.config import GfaConfig
from gfagraph.core.tensor import FeatureMap
from gfagraph.exceptions import ConfigurationError
from gfagraph.graph.construction import DirectedGraph, buildGraph
from gfagraph.sampling.candidates import CandidateTable

logger = get_logger(__name__)

PASS_CANDIDATE_MODES = {"local": "local-only", "global": "global-only"}


class PassStats:
    """Statistics of one aggregation pass."""

    def __init__(
        self,
        kind: str,
        meanDegree: float,
        meanAbsDeviation: float,
        edgesTotal: int,
        candidatesTotal: int,
        similarityEvaluations: int,
        stage: int = 0,
        block: int = 0,
    ):
        self.kind = kind
        self.meanDegree = meanDegree
        self.meanAbsDeviation = meanAbsDeviation
        self.edgesTotal = edgesTotal
        self.candidatesTotal = candidatesTotal
        self.similarityEvaluations = similarityEvaluations
        self.stage = stage
        self.block = block

    @classmethod
    def fromGraph(cls, kind: str, graph: DirectedGraph, stage: int = 0, block: int = 0):
        return cls(
            kind,
            float(np.mean(graph.getDegrees())),
            graph.getMeanAbsDeviation(),
            graph.getEdgesTotal(),
            graph.candidates.getTotal(),
            graph.similarityEvaluations,
            stage,
            block,
        )

    def __repr__(self) -> str:
        return (
            f"PassStats({self.kind!r}, stage={self.stage}, block={self.block}, "
            f"mean_degree={self.meanDegree:.3f}, edges={self.edgesTotal})"
        )


def statsToDict(passStats: list[PassStats]) -> dict:
    """
    Flatten pass statistics into one dictionary of lists with one entry per pass,
    the layout of the ``--stats`` files.
    """
    return {
        "stage": [p.stage for p in passStats],
        "block": [p.block for p in passStats],
        "kind": [p.kind for p in passStats],
        "mean_degree": [p.meanDegree for p in passStats],
        "mean_abs_deviation": [p.meanAbsDeviation for p in passStats],
        "edges_total": [p.edgesTotal for p in passStats],
        "candidates_total": [p.candidatesTotal for p in passStats],
        "similarity_evaluations": [p.similarityEvaluations for p in passStats],
    }


def buildPassGraph(
    fmap: FeatureMap, cfg: GfaConfig, kind: str, threads: int = 1
) -> DirectedGraph:
    """
    Build the graph of one pass: score the input, split the degree budget and select
    neighbors among the local-only (``kind="local"``) or global-only (``kind="global"``)
    candidates.
    """
    if kind not in PASS_CANDIDATE_MODES:
        logger.error("unknown pass kind %s", kind)
        raise ConfigurationError(f"Pass kind must be local or global, got {kind!r}.")
    table = CandidateTable.fromShape(
        fmap.getSpatialShape(),
        cfg.localWindow,
        cfg.gridSize,
        PASS_CANDIDATE_MODES[kind],
    )
    scores = computeScores(fmap, cfg.strategy, cfg.pooling)
    budget = allocateQuotas(scores, cfg.avgDegree, table.counts)
    return buildGraph(fmap, table, budget.targets, cfg.iterations, threads)


def gfaBlockWithStats(
    fmap: FeatureMap,
    cfg: GfaConfig,
    weights: list[ProjectionWeights | None] | None = None,
    channels: int | None = None,
    threads: int = 1,
    stage: int = 0,
    block: int = 0,
) -> tuple[FeatureMap, list[PassStats]]:
    """
    Run one GFA block and return its output together with the statistics of every pass.

    Each pass scores its own input, builds its graph and aggregates; the input is added
    to the aggregate when both have the same number of channels.

    Parameters
    ----------
    fmap : gfagraph.core.tensor.FeatureMap
        The input features.
    cfg : gfagraph.core.config.GfaConfig
        The hyperparameters; ``cfg.passes`` and ``cfg.order`` fix the passes.
    weights : list[ProjectionWeights | None] | None
        One projection per pass. Missing projections are drawn with
        ```ProjectionWeights.seeded``` from ``(cfg.seed, stage, block, pass)``.
    channels : int | None
        The output width of the block; the input width by default.
    threads : int
        The number of worker threads.
    stage : int
        The stage index, only used for seeding and statistics.
    block : int
        The block index within the stage, only used for seeding and statistics.

    Returns
    -------
    (FeatureMap, list[PassStats])
        The block output and the pass statistics.
    """
    kinds = cfg.passKinds()
    if weights is None:
        weights = [None] * len(kinds)
    if len(weights) != len(kinds):
        logger.error("%s projections given for %s passes", len(weights), len(kinds))
        raise ConfigurationError(
            f"Expected {len(kinds)} projections (one per pass), got {len(weights)}."
        )
    outChannels = fmap.channels if channels is None else channels
    if isinstance(outChannels, bool) or int(outChannels) != outChannels or outChannels < 1:
        logger.error("invalid channel width %s", outChannels)
        raise ConfigurationError(
            f"The channel width must be a positive integer, got {outChannels}."
        )

    current = fmap
    passStats = []
    for index, kind in enumerate(kinds):
        projection = weights[index]
        if projection is None:
            projection = ProjectionWeights.seeded(
                current.channels, outChannels, (cfg.seed, stage, block, index)
            )
        graph = buildPassGraph(current, cfg, kind, threads)
        aggregated = aggregateArray(current, graph, projection, threads)
        if aggregated.shape[2] == current.channels:
            aggregated = aggregated + current.asArray()
        current = FeatureMap.fromArray(aggregated)
        stats = PassStats.fromGraph(kind, graph, stage, block)
        logger.debug("%s", stats)
        passStats.append(stats)
    return current, passStats


def gfaBlock(
    fmap: FeatureMap,
    cfg: GfaConfig,
    weights: list[ProjectionWeights | None] | None = None,
    channels: int | None = None,
    threads: int = 1,
) -> FeatureMap:
    """Run one GFA block, see ```gfaBlockWithStats```."""
    output, _ = gfaBlockWithStats(fmap, cfg, weights, channels, threads)
    return output


class StageSpec:
    """A stage of ``blocks`` consecutive GFA blocks sharing one configuration and channel width.

    ``weights`` holds one projection per pass and is shared by all blocks of the stage;
    ``None`` draws seeded projections for every block.
    """

    def __init__(
        self,
        blocks: int,
        config: GfaConfig,
        channels: int | None = None,
        weights: list[ProjectionWeights | None] | None = None,
    ):
        if isinstance(blocks, bool) or int(blocks) != blocks or blocks < 0:
            logger.error("invalid block count %s", blocks)
            raise ConfigurationError(
                f"The block count must be a non-negative integer, got {blocks}."
            )
        self.blocks = int(blocks)
        self.config = config
        self.channels = channels
        self.weights = weights

    def __repr__(self) -> str:
        return f"StageSpec({self.blocks}, {self.config!r}, channels={self.channels})"


class PipelineResult:
    """The output of ```runPipeline``` and the statistics of every pass of every block."""

    def __init__(self, output: FeatureMap, passStats: list[PassStats]):
        self.output = output
        self.passStats = passStats

    def statsDict(self) -> dict:
        return statsToDict(self.passStats)


def runPipeline(
    fmap: FeatureMap, stageSpecs: list[StageSpec], threads: int = 1
) -> PipelineResult:
    """
    Apply the blocks of all stages in order. There is no resampling between stages;
    a stage only changes the channel width in its first block.

    Parameters
    ----------
    fmap : gfagraph.core.tensor.FeatureMap
        The input features.
    stageSpecs : list[StageSpec]
        The stages.
    threads : int
        The number of worker threads.

    Returns
    -------
    PipelineResult : gfagraph.aggregate.pipeline.PipelineResult
        The final features and the per-pass statistics.
    """
    current = fmap
    passStats: list[PassStats] = []
    for stageIndex, spec in enumerate(stageSpecs):
        logger.info("stage %s: %s", stageIndex, spec)
        for blockIndex in range(spec.blocks):
            current, stats = gfaBlockWithStats(
                current,
                spec.config,
                weights=spec.weights,
                channels=spec.channels,
                threads=threads,
                stage=stageIndex,
                block=blockIndex,
            )
            passStats.extend(stats)
    return PipelineResult(current, passStats)
