"""
Transmit covariance block.

Minimizes sum_k Tr(W_k) over PSD covariances at fixed splitting ratios and
phases. The SIC decoding condition is convexified by replacing its two
concave log terms with first-order bounds around the current covariances
while the two convex -ln terms stay exact. Beams are recovered from the
principal eigenvectors.

Covariances are scaled by the mean trace of the expansion point and every
constraint is divided by its right-hand side so the conic program is O(1).
"""

import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from aether.core.conic.problem import (
    Constraint,
    HermitianSdpProblem,
    LinearExpression,
    LogTerm,
    MatrixVar,
    Objective,
    ObjectiveSense,
    ScalarVar,
    Sense,
)
from aether.core.conic.rank import extract_rank_one
from aether.core.conic.solver import SdpSolution, SolveStatus, solve
from aether.core.exceptions import LinearizationError, ScenarioInfeasibleError
from aether.core.model.config import SystemConfig
from aether.core.model.feasibility import constraint_margins, min_margin
from aether.core.model.trace import BlockStatus
from aether.core.model.types import Beamformers, DecodingOrder
from aether.core.optimization.sca import log_tangent
from aether.utils.config.settings import settings

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))

SLACK_DONE = 1e-7
MRT_DOUBLINGS = 60
RESTORATION_POWER_WEIGHT = 1e-4  # weight of sum Tr(X) next to the slacks


def _var(k: int) -> str:
    return f"W{k}"


class BeamformingInput(BaseModel):
    """Fixed quantities of one beamforming solve"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    rows: np.ndarray  # (K, N) effective channels h_k^H
    rho: np.ndarray
    order: DecodingOrder
    W_ref: np.ndarray  # (K, N, N) expansion point
    config: SystemConfig

    @property
    def num_users(self) -> int:
        return self.rows.shape[0]

    @property
    def A(self) -> np.ndarray:
        """sigma^2 + delta^2 / rho_k"""
        return self.config.noise_antenna_var + self.config.noise_id_var / np.asarray(self.rho)

    def H(self, k: int) -> np.ndarray:
        """h_k h_k^H"""
        return np.outer(np.conj(self.rows[k]), self.rows[k])


class BeamformingResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: BlockStatus
    beams: Optional[Beamformers] = None
    objective: float = float("nan")  # sum of traces, watts
    rank_ratios: List[float] = Field(default_factory=list)
    slack: float = 0.0

    @property
    def max_rank_ratio(self) -> float:
        return max(self.rank_ratios) if self.rank_ratios else 0.0


def quadratic_forms(rows: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Q[i, j] = h_i^H W_j h_i"""
    return np.real(np.einsum("in,jnm,im->ij", rows, W, np.conj(rows)))


def lifted_margins(inp: BeamformingInput, W: np.ndarray) -> float:
    """Smallest exact QoS/SIC/energy margin of lifted covariances"""
    Q = quadratic_forms(inp.rows, W)
    return float(min_margin(constraint_margins(Q, inp.rho, inp.order, inp.config)))


def energy_level(config: SystemConfig, rho: float) -> float:
    """Received power sum_j h^H W_j h the energy constraint asks for"""
    return config.energy_threshold / (config.eh_efficiency * (1.0 - rho)) - config.noise_antenna_var


def build_beamforming_problem(inp: BeamformingInput, slack: bool = False) -> HermitianSdpProblem:
    """
    Linearized covariance program.

    With ``slack=True`` the SIC constraints get non-negative slacks and the
    objective becomes their sum; this is the restoration program used to
    reach a point where the plain program is feasible.
    """
    K = inp.num_users
    N = inp.rows.shape[1]
    gamma = inp.config.sinr_threshold
    A = inp.A
    Q_ref = quadratic_forms(inp.rows, inp.W_ref)
    scale = float(np.mean(np.real(np.trace(inp.W_ref, axis1=1, axis2=2))))
    if not np.isfinite(scale) or scale <= 0:
        raise LinearizationError("expansion point has zero transmit power")
    H = [inp.H(k) * scale for k in range(K)]
    after = {k: inp.order.decoded_after(k) for k in range(K)}

    constraints: List[Constraint] = []
    for k in range(K):
        coeffs = {_var(k): H[k] / (gamma * A[k])}
        for j in after[k]:
            coeffs[_var(j)] = -H[k] / A[k]
        constraints.append(
            Constraint(expr=LinearExpression(matrix_coeffs=coeffs), sense=Sense.GE, rhs=1.0, label=f"qos_{k}")
        )

    for k in range(K):
        level = energy_level(inp.config, float(inp.rho[k]))
        if level <= 0:
            continue
        coeffs = {_var(j): H[k] / level for j in range(K)}
        constraints.append(
            Constraint(expr=LinearExpression(matrix_coeffs=coeffs), sense=Sense.GE, rhs=1.0, label=f"energy_{k}")
        )

    slack_vars: List[ScalarVar] = []
    for k, k_bar in inp.order.pairs():
        r1 = Q_ref[k, k]
        r2 = sum(Q_ref[k_bar, j] for j in after[k]) + A[k_bar]
        r3 = sum(Q_ref[k, j] for j in after[k]) + A[k]
        r4 = Q_ref[k_bar, k]
        if r1 <= 0 or r4 <= 0:
            raise LinearizationError(f"degenerate SIC expansion point for users ({k}, {k_bar})")
        own_slope, own_intercept = log_tangent(r1)
        cross_slope, cross_intercept = log_tangent(r2)

        linear = {_var(k): own_slope * H[k]}
        for j in after[k]:
            linear[_var(j)] = linear.get(_var(j), 0) + cross_slope * H[k_bar]
        scalars = {}
        if slack:
            name = f"slack_{k}_{k_bar}"
            slack_vars.append(ScalarVar(name=name, lower=0.0))
            scalars[name] = -1.0
        own_interference = LinearExpression(
            matrix_coeffs={_var(j): H[k] / r3 for j in after[k]}, constant=A[k] / r3
        )
        cross = LinearExpression(matrix_coeffs={_var(k): H[k_bar] / r4})
        constraints.append(
            Constraint(
                expr=LinearExpression(matrix_coeffs=linear, scalar_coeffs=scalars, constant=cross_slope * A[k_bar]),
                sense=Sense.LE,
                rhs=float(np.log(r3 * r4)) - own_intercept - cross_intercept,
                logs=[
                    LogTerm(coefficient=-1.0, argument=own_interference, reference=1.0),
                    LogTerm(coefficient=-1.0, argument=cross, reference=1.0),
                ],
                label=f"sic_{k}_{k_bar}",
            )
        )

    if slack:
        objective = LinearExpression(
            matrix_coeffs={_var(k): RESTORATION_POWER_WEIGHT * np.eye(N) for k in range(K)},
            scalar_coeffs={v.name: 1.0 for v in slack_vars},
        )
    else:
        objective = LinearExpression(matrix_coeffs={_var(k): np.eye(N) for k in range(K)})
    return HermitianSdpProblem(
        name="beamforming_restoration" if slack else "beamforming",
        matrix_vars=[MatrixVar(name=_var(k), dim=N) for k in range(K)],
        scalar_vars=slack_vars,
        objective=Objective(sense=ObjectiveSense.MINIMIZE, expr=objective),
        constraints=constraints,
    )


def _status(status: SolveStatus) -> BlockStatus:
    return {
        SolveStatus.OPTIMAL: BlockStatus.OPTIMAL,
        SolveStatus.INFEASIBLE: BlockStatus.INFEASIBLE,
        SolveStatus.NUMERICAL_FAILURE: BlockStatus.NUMERICAL_FAILURE,
    }[status]


def _extract(result: SdpSolution, inp: BeamformingInput, slack: bool) -> BeamformingResult:
    scale = float(np.mean(np.real(np.trace(inp.W_ref, axis1=1, axis2=2))))
    W = np.stack([result.matrices[_var(k)] * scale for k in range(inp.num_users)])
    vectors, ratios = [], []
    for k in range(inp.num_users):
        vector, ratio = extract_rank_one(W[k])
        vectors.append(vector)
        ratios.append(ratio)
    return BeamformingResult(
        status=BlockStatus.OPTIMAL,
        beams=Beamformers(w=np.stack(vectors), W=W),
        objective=float(np.real(np.trace(W, axis1=1, axis2=2)).sum()),
        rank_ratios=ratios,
        slack=float(sum(result.scalars.values())) if slack else 0.0,
    )


def solve_beamforming(inp: BeamformingInput, slack: bool = False) -> BeamformingResult:
    """
    Solve the covariance program and extract beams.

    A solution whose covariances are not rank-one to ``settings.rank_ratio_tol``
    is solved again at the backend tolerance ``settings.rank_solver_tol``; the
    re-solve is kept when it lowers the worst rank ratio.

    Returns:
        BeamformingResult with beams carrying both w_k and the lifted W_k,
        the objective sum_k Tr(W_k) in watts and the per-user ratios
        lambda_2 / lambda_1.
    """
    problem = build_beamforming_problem(inp, slack=slack)
    result = solve(problem)
    if result.status != SolveStatus.OPTIMAL:
        logger.info(f"{problem.name}: {result.status.value}")
        return BeamformingResult(status=_status(result.status))
    extracted = _extract(result, inp, slack)

    if extracted.max_rank_ratio > settings.rank_ratio_tol and settings.rank_solver_tol < settings.solver_tol:
        tight = solve(problem, backend_tol=settings.rank_solver_tol)
        if tight.status == SolveStatus.OPTIMAL:
            refined = _extract(tight, inp, slack)
            logger.debug(
                f"{problem.name}: rank ratio {extracted.max_rank_ratio:.2e} -> {refined.max_rank_ratio:.2e} "
                f"at backend tolerance {settings.rank_solver_tol:g}"
            )
            if refined.max_rank_ratio < extracted.max_rank_ratio:
                extracted = refined
    return extracted


def padded_mrt(rows: np.ndarray, rho: np.ndarray, order: DecodingOrder, config: SystemConfig) -> np.ndarray:
    """
    Interference-padded MRT covariances.

    W_k = p_k h_k h_k^H / ||h_k||^2 with p_k = gamma A_k K / ||h_k||^2, all
    powers doubled until every QoS constraint holds.
    """
    K = rows.shape[0]
    norms = np.sum(np.abs(rows) ** 2, axis=1)
    if np.any(norms <= 0):
        raise ScenarioInfeasibleError("a user has an all-zero effective channel")
    A = config.noise_antenna_var + config.noise_id_var / np.asarray(rho)
    powers = config.sinr_threshold * A * K / norms
    directions = np.einsum("kn,km->knm", np.conj(rows), rows) / norms[:, None, None]
    for _ in range(MRT_DOUBLINGS):
        W = powers[:, None, None] * directions
        qos = constraint_margins(quadratic_forms(rows, W), rho, order, config)["qos"]
        if np.all(qos >= 0):
            break
        powers = 2.0 * powers
    return powers[:, None, None] * directions


def restore_feasibility(inp: BeamformingInput, passes: int) -> np.ndarray:
    """
    Move the expansion point into the SIC-feasible set.

    Runs up to ``passes`` slack-minimizing passes, each linearized at the
    previous pass's covariances.

    Raises:
        ScenarioInfeasibleError: QoS and energy cannot be met, or the SIC
            slack cannot be driven to zero.
    """
    current = inp
    for attempt in range(1, passes + 1):
        result = solve_beamforming(current, slack=True)
        if result.status == BlockStatus.INFEASIBLE:
            raise ScenarioInfeasibleError("QoS and energy constraints cannot be met at the initial split and phases")
        if result.status != BlockStatus.OPTIMAL:
            logger.warning(f"Restoration pass {attempt} failed: {result.status.value}")
            break
        logger.debug(f"Restoration pass {attempt}: SIC slack {result.slack:.3e}")
        current = current.model_copy(update={"W_ref": result.beams.W})
        if result.slack <= SLACK_DONE:
            return result.beams.W
    raise ScenarioInfeasibleError(f"SIC decoding conditions unattainable after {passes} restoration passes")
