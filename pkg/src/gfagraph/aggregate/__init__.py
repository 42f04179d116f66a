from gfagraph.aggregate.aggregation import (
    ProjectionWeights,
    aggregateArray,
    aggregatePass,
    attentionTable,
    attentionWeights,
)
from gfagraph.aggregate.pipeline import (
    PassStats,
    PipelineResult,
    StageSpec,
    buildPassGraph,
    gfaBlock,
    gfaBlockWithStats,
    runPipeline,
    statsToDict,
)

__all__ = [
    "ProjectionWeights",
    "attentionWeights",
    "attentionTable",
    "aggregateArray",
    "aggregatePass",
    "PassStats",
    "StageSpec",
    "PipelineResult",
    "buildPassGraph",
    "gfaBlock",
    "gfaBlockWithStats",
    "runPipeline",
    "statsToDict",
]
