from gfagraph.core.config import (
    CANDIDATE_MODES,
    PASS_ORDERS,
    PASS_TOPOLOGIES,
    POOLING_MODES,
    SCORING_STRATEGIES,
    GfaConfig,
)
from gfagraph.core.tensor import FeatureMap, coordToNode, getFeature, nodeToCoord

__all__ = [
    "FeatureMap",
    "GfaConfig",
    "nodeToCoord",
    "coordToNode",
    "getFeature",
    "SCORING_STRATEGIES",
    "POOLING_MODES",
    "PASS_ORDERS",
    "PASS_TOPOLOGIES",
    "CANDIDATE_MODES",
]
