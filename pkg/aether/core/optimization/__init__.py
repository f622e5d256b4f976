"""
Stage-1 ordering, the three optimization blocks, the alternating loop and baselines.
"""

from aether.core.optimization.baselines import (
    ALGORITHMS,
    run_algorithm,
    run_exhaustive_order,
    run_no_irs,
    run_non_alternating,
    run_random_phase,
    run_zf,
)
from aether.core.optimization.jdbpr import complexity_estimate, run_jdbpr, run_stage2
from aether.core.optimization.stage1 import gaussian_randomization, order_from_gains, run_stage1, solve_sum_gain_relaxation

__all__ = [
    "ALGORITHMS",
    "run_algorithm",
    "run_jdbpr",
    "run_stage2",
    "run_exhaustive_order",
    "run_non_alternating",
    "run_zf",
    "run_random_phase",
    "run_no_irs",
    "complexity_estimate",
    "run_stage1",
    "solve_sum_gain_relaxation",
    "gaussian_randomization",
    "order_from_gains",
]
