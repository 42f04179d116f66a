from gfagraph.oracle.reference import (
    OracleReport,
    compareAggregate,
    countEdges,
    oracleAggregate,
    oracleCandidates,
    oracleGraph,
    oracleQuotas,
    oracleRmsGScore,
    oracleScores,
    oracleSobel,
    oracleThreshold,
    oracleTopk,
)

__all__ = [
    "OracleReport",
    "oracleTopk",
    "oracleSobel",
    "oracleRmsGScore",
    "oracleScores",
    "oracleCandidates",
    "oracleQuotas",
    "oracleThreshold",
    "oracleGraph",
    "oracleAggregate",
    "countEdges",
    "compareAggregate",
]
