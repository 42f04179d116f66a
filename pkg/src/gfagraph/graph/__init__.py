from gfagraph.graph.construction import (
    DirectedGraph,
    SimilarityRow,
    bisectionTrace,
    bisectThreshold,
    buildGraph,
    cosineRow,
    graphStats,
)

__all__ = [
    "SimilarityRow",
    "DirectedGraph",
    "cosineRow",
    "bisectThreshold",
    "bisectionTrace",
    "buildGraph",
    "graphStats",
]
