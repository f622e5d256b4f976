"""
Power-splitting block.

At fixed beams and phases, finds splitting ratios that satisfy the QoS,
energy and SIC constraints with the largest common slack. 1/rho enters
through epigraph variables tau_k >= 1/rho_k; the concave -1/rho_k of the SIC
condition is replaced by its tangent at the incumbent ratios.
"""

import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from aether.core.conic.problem import (
    Constraint,
    HermitianSdpProblem,
    InverseTerm,
    LinearExpression,
    Objective,
    ObjectiveSense,
    ScalarVar,
    Sense,
)
from aether.core.conic.solver import SolveStatus, solve
from aether.core.model.config import SystemConfig
from aether.core.model.feasibility import constraint_margins, min_margin
from aether.core.model.trace import BlockStatus
from aether.core.model.types import DecodingOrder, PowerSplit
from aether.core.optimization.sca import neg_inverse_tangent
from aether.utils.config.settings import settings

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))

RHO_MIN = 1e-6
RHO_MAX = 1.0 - 1e-6
SLACK = "s"


class PowerSplitInput(BaseModel):
    """Received powers at fixed beams and phases"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    P: np.ndarray  # P[i, j] = |h_i^H w_j|^2
    rho_ref: np.ndarray
    order: DecodingOrder
    config: SystemConfig
    nulled: Optional[np.ndarray] = None  # cross links carrying no interference

    @property
    def num_users(self) -> int:
        return self.P.shape[0]

    def interference(self, receiver: int, k: int) -> float:
        """sum_{s(j) > s(k)} P[receiver, j]"""
        return float(sum(self.P[receiver, j] for j in self.order.decoded_after(k)))

    def pair_active(self, k: int, k_bar: int) -> bool:
        return self.nulled is None or not bool(self.nulled[k_bar, k])


class PowerSplitResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: BlockStatus
    split: PowerSplit
    slack: float = float("nan")
    min_margin: float = float("nan")


def _rho(k: int) -> str:
    return f"rho{k}"


def _tau(k: int) -> str:
    return f"tau{k}"


def build_power_split_problem(inp: PowerSplitInput) -> HermitianSdpProblem:
    """Scalar max-slack program over (rho, tau, s)"""
    K = inp.num_users
    cfg = inp.config
    gamma, sigma2, delta2 = cfg.sinr_threshold, cfg.noise_antenna_var, cfg.noise_id_var
    P = inp.P

    scalar_vars = [ScalarVar(name=_rho(k), lower=RHO_MIN, upper=RHO_MAX) for k in range(K)]
    scalar_vars += [ScalarVar(name=_tau(k), lower=1.0) for k in range(K)]
    scalar_vars.append(ScalarVar(name=SLACK, lower=0.0, upper=1.0))

    constraints: List[Constraint] = []
    for k in range(K):
        constraints.append(
            Constraint(
                expr=LinearExpression(scalar_coeffs={_tau(k): 1.0}),
                sense=Sense.GE,
                rhs=0.0,
                inverses=[InverseTerm(coefficient=-1.0, scalar=_rho(k))],
                label=f"tau_{k}",
            )
        )

    for k in range(K):
        signal = P[k, k]
        constraints.append(
            Constraint(
                expr=LinearExpression(
                    scalar_coeffs={_tau(k): -gamma * delta2 / signal, SLACK: -1.0},
                    constant=1.0 - gamma * (inp.interference(k, k) + sigma2) / signal,
                ),
                sense=Sense.GE,
                rhs=0.0,
                label=f"qos_{k}",
            )
        )

    for k in range(K):
        c = cfg.eh_efficiency * (P[k].sum() + sigma2) / cfg.energy_threshold
        constraints.append(
            Constraint(
                expr=LinearExpression(scalar_coeffs={_rho(k): -c, SLACK: -1.0}, constant=c - 1.0),
                sense=Sense.GE,
                rhs=0.0,
                label=f"energy_{k}",
            )
        )

    for k, k_bar in inp.order.pairs():
        if not inp.pair_active(k, k_bar):
            continue
        rho_slope, rho_intercept = neg_inverse_tangent(inp.rho_ref[k])
        own_noise = inp.interference(k, k) + sigma2
        cross_noise = inp.interference(k_bar, k) + sigma2
        norm = P[k, k] * cross_noise
        constant = (P[k, k] * cross_noise - P[k_bar, k] * own_noise + P[k_bar, k] * delta2 * rho_intercept) / norm
        constraints.append(
            Constraint(
                expr=LinearExpression(
                    scalar_coeffs={
                        _tau(k_bar): P[k, k] * delta2 / norm,
                        _rho(k): P[k_bar, k] * delta2 * rho_slope / norm,
                        SLACK: 1.0,
                    },
                    constant=constant,
                ),
                sense=Sense.LE,
                rhs=0.0,
                label=f"sic_{k}_{k_bar}",
            )
        )

    return HermitianSdpProblem(
        name="power_split",
        scalar_vars=scalar_vars,
        objective=Objective(sense=ObjectiveSense.MAXIMIZE, expr=LinearExpression(scalar_coeffs={SLACK: 1.0})),
        constraints=constraints,
    )


def exact_margin(inp: PowerSplitInput, rho: np.ndarray) -> float:
    return float(min_margin(constraint_margins(inp.P, rho, inp.order, inp.config, inp.nulled)))


def solve_power_split(inp: PowerSplitInput) -> PowerSplitResult:
    """
    Max-slack splitting ratios.

    If the solve fails, or its point does not pass the exact constraints, the
    incumbent ratios are returned with a non-optimal status.
    """
    incumbent = PowerSplit(rho=inp.rho_ref)
    tol = inp.config.feasibility_tol
    if np.any(np.diagonal(inp.P) <= 0):
        return PowerSplitResult(status=BlockStatus.INFEASIBLE, split=incumbent)

    result = solve(build_power_split_problem(inp))
    if result.status != SolveStatus.OPTIMAL:
        logger.info(f"Power split: {result.status.value}, keeping incumbent")
        status = BlockStatus.INFEASIBLE if result.status == SolveStatus.INFEASIBLE else BlockStatus.NUMERICAL_FAILURE
        return PowerSplitResult(status=status, split=incumbent, min_margin=exact_margin(inp, inp.rho_ref))

    rho = np.clip([result.scalars[_rho(k)] for k in range(inp.num_users)], RHO_MIN, RHO_MAX)
    margin = exact_margin(inp, rho)
    if margin < -tol:
        logger.warning(f"Power split point fails the exact constraints (margin {margin:.2e}), keeping incumbent")
        return PowerSplitResult(status=BlockStatus.STALLED, split=incumbent, min_margin=exact_margin(inp, inp.rho_ref))
    return PowerSplitResult(
        status=BlockStatus.OPTIMAL, split=PowerSplit(rho=rho), slack=result.scalars[SLACK], min_margin=margin
    )
