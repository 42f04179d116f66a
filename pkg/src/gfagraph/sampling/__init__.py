from gfagraph.sampling.candidates import (
    CandidateSet,
    CandidateTable,
    buildCandidates,
    gridStrides,
    localOffsets,
    sampleGlobal,
    sampleLocal,
)

__all__ = [
    "CandidateSet",
    "CandidateTable",
    "buildCandidates",
    "gridStrides",
    "localOffsets",
    "sampleGlobal",
    "sampleLocal",
]
