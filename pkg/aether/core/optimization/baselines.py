"""
Comparison algorithms and the common entry point ``run_algorithm``.
"""

import copy
import logging
import time
from itertools import permutations
from typing import Callable, Dict, Optional

import numpy as np

from aether.core.channels.streams import split_algorithm_stream
from aether.core.exceptions import AetherException, OrderSearchLimitError, ScenarioInfeasibleError
from aether.core.model.config import SystemConfig
from aether.core.model.types import AlgorithmId, ChannelSet, DecodingOrder, PhaseShift, Solution
from aether.core.optimization.jdbpr import run_jdbpr, run_stage2
from aether.core.optimization.stage1 import order_from_gains, run_stage1
from aether.utils.config.settings import settings
from aether.utils.logging import log_run_error, log_run_start, log_run_success

logger = logging.getLogger(__name__)
logger.setLevel(getattr(logging, settings.log_level.value))

MAX_EXHAUSTIVE_USERS = 6


def run_exhaustive_order(
    config: SystemConfig, channels: ChannelSet, rng: np.random.Generator, max_iters: Optional[int] = None
) -> Solution:
    """
    Stage 2 for every decoding order, keeping the lowest-power feasible result.

    Every permutation starts from the same stage-1 phases and an identical
    copy of the stage-2 stream.
    """
    K = config.num_users
    if K > MAX_EXHAUSTIVE_USERS:
        raise OrderSearchLimitError(f"exhaustive order search supports K <= {MAX_EXHAUSTIVE_USERS}, got {K}")
    stage1_rng, stage2_rng = split_algorithm_stream(rng)
    stage1 = run_stage1(channels, config.randomization_count, stage1_rng)

    best: Optional[Solution] = None
    for sequence in permutations(range(K)):
        order = DecodingOrder.from_sequence(sequence)
        try:
            solution = run_stage2(
                config,
                channels,
                order,
                stage1.phases,
                copy.deepcopy(stage2_rng),
                algorithm=AlgorithmId.EX_JBPR_OPT,
                max_iters=max_iters,
            )
        except AetherException as e:
            logger.debug(f"Order {list(sequence)} rejected: {e}")
            continue
        if best is None or solution.objective < best.objective:
            best = solution
    if best is None:
        raise ScenarioInfeasibleError("no decoding order admits a feasible design")
    return best


def run_non_alternating(
    config: SystemConfig, channels: ChannelSet, rng: np.random.Generator, max_iters: Optional[int] = None
) -> Solution:
    """One beamforming, power-split and phase pass after stage 1"""
    stage1_rng, stage2_rng = split_algorithm_stream(rng)
    stage1 = run_stage1(channels, config.randomization_count, stage1_rng)
    return run_stage2(
        config, channels, stage1.order, stage1.phases, stage2_rng, algorithm=AlgorithmId.JDBPR_COM, max_iters=1
    )


def run_zf(
    config: SystemConfig, channels: ChannelSet, rng: np.random.Generator, max_iters: Optional[int] = None
) -> Solution:
    """Zero-forcing beams, with splitting ratios and phases still alternated"""
    stage1_rng, stage2_rng = split_algorithm_stream(rng)
    stage1 = run_stage1(channels, config.randomization_count, stage1_rng)
    return run_stage2(
        config,
        channels,
        stage1.order,
        stage1.phases,
        stage2_rng,
        algorithm=AlgorithmId.JDBPR_ZF,
        zero_forcing=True,
        max_iters=max_iters,
    )


def run_random_phase(
    config: SystemConfig, channels: ChannelSet, rng: np.random.Generator, max_iters: Optional[int] = None
) -> Solution:
    """Uniform random phases held fixed; the order follows the gains under them"""
    stage1_rng, stage2_rng = split_algorithm_stream(rng)
    phases = PhaseShift(theta=stage1_rng.uniform(0.0, 2.0 * np.pi, channels.num_elements))
    order = order_from_gains(channels, phases)
    return run_stage2(
        config,
        channels,
        order,
        phases,
        stage2_rng,
        algorithm=AlgorithmId.JDBP_RAN,
        optimize_phase=False,
        max_iters=max_iters,
    )


def run_no_irs(
    config: SystemConfig, channels: ChannelSet, rng: np.random.Generator, max_iters: Optional[int] = None
) -> Solution:
    """Direct links only; identical to the joint design with M = 0"""
    reduced = config.updated(num_elements=0)
    solution = run_jdbpr(reduced, channels.without_irs(), rng, max_iters=max_iters)
    return solution.model_copy(update={"algorithm": AlgorithmId.NO_IRS})


def _run_joint(
    config: SystemConfig, channels: ChannelSet, rng: np.random.Generator, max_iters: Optional[int] = None
) -> Solution:
    return run_jdbpr(config, channels, rng, max_iters=max_iters)


ALGORITHMS: Dict[AlgorithmId, Callable[..., Solution]] = {
    AlgorithmId.JDBPR_OPT: _run_joint,
    AlgorithmId.EX_JBPR_OPT: run_exhaustive_order,
    AlgorithmId.JDBPR_COM: run_non_alternating,
    AlgorithmId.JDBPR_ZF: run_zf,
    AlgorithmId.JDBP_RAN: run_random_phase,
    AlgorithmId.NO_IRS: run_no_irs,
}


def evaluation_channels(solution: Solution, channels: ChannelSet) -> ChannelSet:
    """Channels a solution's constraints are evaluated on"""
    if solution.phases.num_elements == 0 and channels.num_elements > 0:
        return channels.without_irs()
    return channels


def evaluation_config(solution: Solution, config: SystemConfig) -> SystemConfig:
    if solution.phases.num_elements != config.num_elements:
        return config.updated(num_elements=solution.phases.num_elements)
    return config


def run_algorithm(
    algorithm: AlgorithmId,
    config: SystemConfig,
    channels: ChannelSet,
    rng: np.random.Generator,
    max_iters: Optional[int] = None,
) -> Solution:
    """
    Run one algorithm with run-level logging.

    Raises:
        AetherException: Propagated from the algorithm after logging
    """
    algorithm = AlgorithmId(algorithm)
    start = time.time()
    log_run_start(algorithm.value, config.num_users, config.num_antennas, config.num_elements)
    try:
        solution = ALGORITHMS[algorithm](config, channels, rng, max_iters=max_iters)
    except ScenarioInfeasibleError as e:
        logger.info(f"{algorithm.value}: infeasible scenario ({e})")
        raise
    except AetherException as e:
        log_run_error(algorithm.value, str(e), time.time() - start)
        raise
    log_run_success(algorithm.value, solution.objective, solution.iterations, time.time() - start)
    return solution
