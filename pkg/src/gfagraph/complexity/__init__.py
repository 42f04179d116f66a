from gfagraph.complexity.quotas import ComplexityScores, allocateQuotas
from gfagraph.complexity.scoring import (
    SOBEL_X,
    SOBEL_Y,
    altScores,
    computeScores,
    localEntropy,
    rescalingResidual,
    rmsGScore,
    sobelGradients,
)

__all__ = [
    "ComplexityScores",
    "allocateQuotas",
    "SOBEL_X",
    "SOBEL_Y",
    "sobelGradients",
    "rmsGScore",
    "altScores",
    "rescalingResidual",
    "localEntropy",
    "computeScores",
]
