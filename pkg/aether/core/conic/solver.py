"""
cvxpy backend for ``HermitianSdpProblem``.

cvxpy's complex-to-real reduction carries Hermitian variables into real
symmetric cones of twice the dimension, so problems are stated directly in
complex form here.
"""

import itertools
import logging
import time
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import cvxpy as cp
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from aether.core.conic.dump import dump_problem
from aether.core.conic.problem import (
    Constraint,
    HermitianSdpProblem,
    LinearExpression,
    LogTerm,
    ObjectiveSense,
    Sense,
)
from aether.utils.config.settings import EXP_CONE_SOLVERS, settings

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))

# Breakpoints of the secant majorization, as multiples of the log argument's
# reference value
SECANT_POINTS = (0.5, 1.0, 2.0)

_dump_counter = itertools.count(1)


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    NUMERICAL_FAILURE = "numerical_failure"


class SolverStats(BaseModel):
    solver: str = ""
    iterations: Optional[int] = None
    solve_time: float = 0.0
    max_residual: float = float("inf")
    min_eigenvalue: float = float("nan")
    raw_status: str = ""
    retried: bool = False
    exact_logs: bool = True


class SdpSolution(BaseModel):
    """Result of one conic solve"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: SolveStatus
    matrices: Dict[str, np.ndarray] = Field(default_factory=dict)
    scalars: Dict[str, float] = Field(default_factory=dict)
    objective: Optional[float] = None
    stats: SolverStats = Field(default_factory=SolverStats)

    @property
    def ok(self) -> bool:
        return self.status == SolveStatus.OPTIMAL


def solver_options(name: str, tol: float) -> Dict[str, float]:
    """Backend-specific accuracy settings"""
    if name == "CLARABEL":
        return {"tol_gap_abs": tol, "tol_gap_rel": tol, "tol_feas": tol, "max_iter": 500}
    if name == "SCS":
        loose = max(tol, 1e-7)
        return {"eps_abs": loose, "eps_rel": loose, "max_iters": 200000}
    return {}


class _Builder:
    """Translate one problem into cvxpy objects"""

    def __init__(self, problem: HermitianSdpProblem, regularization: float, exact_logs: bool):
        self.problem = problem
        self.exact_logs = exact_logs
        self.matrices = {v.name: cp.Variable((v.dim, v.dim), hermitian=True, name=v.name) for v in problem.matrix_vars}
        self.scalars = {v.name: cp.Variable(name=v.name) for v in problem.scalar_vars}
        self.constraints: List[cp.Constraint] = []
        for v in problem.matrix_vars:
            X = self.matrices[v.name]
            self.constraints.append(X >> regularization * np.eye(v.dim) if regularization > 0 else X >> 0)
        for v in problem.scalar_vars:
            t = self.scalars[v.name]
            if v.lower is not None:
                self.constraints.append(t >= v.lower)
            if v.upper is not None:
                self.constraints.append(t <= v.upper)

    def linear(self, expr: LinearExpression):
        total = expr.constant
        for name, A in expr.matrix_coeffs.items():
            total = total + cp.real(cp.trace(A @ self.matrices[name]))
        for name, c in expr.scalar_coeffs.items():
            total = total + c * self.scalars[name]
        return total

    def log_term(self, term: LogTerm, sense: Sense):
        arg = self.linear(term.argument)
        if self.exact_logs:
            return term.coefficient * cp.log(arg)
        # piecewise-linear secant interpolant of c*ln(x) on a bracket around the reference
        ref = term.reference if term.reference and term.reference > 0 else 1.0
        points = [ref * p for p in SECANT_POINTS]
        u = cp.Variable()
        self.constraints += [arg >= points[0], arg <= points[-1]]
        for a, b in zip(points, points[1:]):
            slope = (np.log(b) - np.log(a)) / (b - a)
            line = term.coefficient * (np.log(a) + slope * (arg - a))
            self.constraints.append(u >= line if sense == Sense.LE else u <= line)
        return u

    def constraint(self, c: Constraint):
        lhs = self.linear(c.expr)
        for term in c.logs:
            lhs = lhs + self.log_term(term, c.sense)
        for term in c.inverses:
            lhs = lhs + term.coefficient * cp.inv_pos(self.scalars[term.scalar])
        if c.sense == Sense.LE:
            return lhs <= c.rhs
        if c.sense == Sense.GE:
            return lhs >= c.rhs
        return lhs == c.rhs

    def build(self) -> cp.Problem:
        constraints = self.constraints + [self.constraint(c) for c in self.problem.constraints]
        objective = self.problem.objective
        if objective.sense == ObjectiveSense.MINIMIZE:
            goal = cp.Minimize(self.linear(objective.expr))
        elif objective.sense == ObjectiveSense.MAXIMIZE:
            goal = cp.Maximize(self.linear(objective.expr))
        else:
            goal = cp.Minimize(0)
        return cp.Problem(goal, constraints)


def certify(problem: HermitianSdpProblem, matrices: Dict[str, np.ndarray], scalars: Dict[str, float]) -> Tuple[float, float]:
    """Largest scaled constraint violation and smallest relative eigenvalue of the point"""
    residual = 0.0
    for c in problem.constraints:
        residual = max(residual, c.violation(matrices, scalars))
    for v in problem.scalar_vars:
        t = scalars[v.name]
        if v.lower is not None:
            residual = max(residual, (v.lower - t) / max(1.0, abs(v.lower)))
        if v.upper is not None:
            residual = max(residual, (t - v.upper) / max(1.0, abs(v.upper)))
    min_eig = np.inf
    for name, X in matrices.items():
        eig = np.linalg.eigvalsh(X)
        min_eig = min(min_eig, float(eig[0]) / max(1.0, float(eig[-1])))
    return residual, float(min_eig)


def _run_backend(cvx_problem: cp.Problem, solver: str, backend_tol: float) -> str:
    cvx_problem.solve(solver=solver, **solver_options(solver, backend_tol))
    return cvx_problem.status


def _solve_once(
    problem: HermitianSdpProblem, tol: float, solver: str, regularization: float, backend_tol: float
) -> SdpSolution:
    candidates = [solver]
    if settings.fallback_solver and settings.fallback_solver != solver:
        candidates.append(settings.fallback_solver)

    for name in candidates:
        exact_logs = name in EXP_CONE_SOLVERS
        builder = _Builder(problem, regularization, exact_logs)
        cvx_problem = builder.build()
        stats = SolverStats(solver=name, exact_logs=exact_logs)
        start = time.time()
        try:
            raw = _run_backend(cvx_problem, name, backend_tol)
        except (cp.error.SolverError, ValueError) as e:
            logger.warning(f"{problem.name}: solver {name} failed: {e}")
            continue
        stats.solve_time = time.time() - start
        stats.raw_status = str(raw)
        solver_stats = getattr(cvx_problem, "solver_stats", None)
        stats.iterations = getattr(solver_stats, "num_iters", None) if solver_stats else None

        if raw in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
            return SdpSolution(status=SolveStatus.INFEASIBLE, stats=stats)
        if raw not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
            logger.warning(f"{problem.name}: solver {name} returned status {raw}")
            return SdpSolution(status=SolveStatus.NUMERICAL_FAILURE, stats=stats)

        matrices = {}
        for key, X in builder.matrices.items():
            value = np.asarray(X.value, dtype=complex)
            matrices[key] = 0.5 * (value + value.conj().T)
        scalars = {key: float(t.value) for key, t in builder.scalars.items()}
        stats.max_residual, stats.min_eigenvalue = certify(problem, matrices, scalars)
        if stats.max_residual > tol or stats.min_eigenvalue < -tol:
            logger.warning(
                f"{problem.name}: {name} point rejected (residual {stats.max_residual:.2e}, "
                f"min eigenvalue {stats.min_eigenvalue:.2e})"
            )
            return SdpSolution(status=SolveStatus.NUMERICAL_FAILURE, stats=stats)
        objective = None if problem.objective.sense == ObjectiveSense.FEASIBILITY else float(cvx_problem.value)
        return SdpSolution(status=SolveStatus.OPTIMAL, matrices=matrices, scalars=scalars, objective=objective, stats=stats)

    return SdpSolution(status=SolveStatus.NUMERICAL_FAILURE, stats=SolverStats(solver=solver, raw_status="solver_error"))


def solve(
    problem: HermitianSdpProblem,
    tol: Optional[float] = None,
    solver: Optional[str] = None,
    backend_tol: Optional[float] = None,
) -> SdpSolution:
    """
    Solve a lifted subproblem.

    An OPTIMAL result is certified independently of the backend: every
    constraint holds to ``tol`` (scaled) and every matrix variable has its
    smallest eigenvalue above ``-tol``. A NUMERICAL_FAILURE is retried once
    with the PSD cones tightened to ``X >= regularization * I``. With
    ``settings.dump_dir`` set, every problem is also written there in the
    text form of ``aether.core.conic.dump``.

    Args:
        problem: Problem in standard form
        tol: Certification tolerance, defaults to settings.residual_tol
        solver: Backend name, defaults to settings.solver
        backend_tol: Gap and feasibility tolerance handed to the backend,
            defaults to settings.solver_tol

    Returns:
        SdpSolution with status OPTIMAL, INFEASIBLE or NUMERICAL_FAILURE
    """
    tol = settings.residual_tol if tol is None else tol
    backend_tol = settings.solver_tol if backend_tol is None else backend_tol
    solver = (solver or settings.solver).upper()
    if settings.dump_dir:
        path = dump_problem(problem, Path(settings.dump_dir) / f"{problem.name}_{next(_dump_counter):06d}.txt")
        logger.debug(f"{problem.name}: dumped to {path}")
    result = _solve_once(problem, tol, solver, regularization=0.0, backend_tol=backend_tol)
    if result.status == SolveStatus.NUMERICAL_FAILURE:
        logger.warning(f"{problem.name}: retrying with regularization {settings.regularization:g}")
        result = _solve_once(problem, tol, solver, regularization=settings.regularization, backend_tol=backend_tol)
        result.stats.retried = True
    logger.debug(f"{problem.name}: {result.status.value} via {result.stats.solver}")
    return result
