"""
Lifted convex subproblems: standard form, cvxpy backend and rank-one recovery.
"""

from aether.core.conic.problem import (
    Constraint,
    HermitianSdpProblem,
    InverseTerm,
    LinearExpression,
    LogTerm,
    MatrixVar,
    Objective,
    ObjectiveSense,
    ScalarVar,
    Sense,
)
from aether.core.conic.rank import extract_rank_one, is_rank_one, psd_factor
from aether.core.conic.solver import SdpSolution, SolveStatus, solve

__all__ = [
    "HermitianSdpProblem",
    "MatrixVar",
    "ScalarVar",
    "LinearExpression",
    "LogTerm",
    "InverseTerm",
    "Constraint",
    "Objective",
    "ObjectiveSense",
    "Sense",
    "SdpSolution",
    "SolveStatus",
    "solve",
    "extract_rank_one",
    "is_rank_one",
    "psd_factor",
]
