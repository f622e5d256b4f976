"""
Logging utilities for optimization runs.
"""

import logging
from typing import Optional

from aether.utils.config.settings import settings

# Configure module logger
logger = logging.getLogger("aether.runs")
logger.setLevel(getattr(logging, settings.log_level.value))


def configure_logging(level: Optional[str] = None) -> None:
    """
    Install a rich handler on the package logger.

    Args:
        level: Optional level name, defaults to settings.log_level
    """
    from rich.logging import RichHandler

    level_name = (level or settings.log_level.value).upper()
    root = logging.getLogger("aether")
    root.setLevel(getattr(logging, level_name))
    if not any(isinstance(h, RichHandler) for h in root.handlers):
        root.addHandler(RichHandler(show_path=settings.debug, rich_tracebacks=True))
    logger.setLevel(getattr(logging, level_name))


def log_run_start(algorithm: str, num_users: int, num_antennas: int, num_elements: int) -> None:
    """
    Log the start of an optimization run.

    Args:
        algorithm: Algorithm identifier
        num_users: Number of users K
        num_antennas: Number of BS antennas N
        num_elements: Number of IRS elements M
    """
    logger.info(f"Running {algorithm} (K={num_users}, N={num_antennas}, M={num_elements})")


def log_iteration(algorithm: str, iteration: int, objective: float, statuses: str, min_margin: float) -> None:
    """
    Log one outer iteration.

    Args:
        algorithm: Algorithm identifier
        iteration: Outer iteration index
        objective: Objective after the beamforming block (watts)
        statuses: Compact status triple of the three blocks
        min_margin: Smallest normalized constraint margin of the iterate
    """
    logger.debug(f"{algorithm} r={iteration} P={objective:.6e} W [{statuses}] min_margin={min_margin:.3e}")


def log_run_success(algorithm: str, objective: float, iterations: int, elapsed_time: float) -> None:
    """
    Log a finished run.

    Args:
        algorithm: Algorithm identifier
        objective: Final transmit power in watts
        iterations: Number of outer iterations
        elapsed_time: Execution time in seconds
    """
    logger.info(f"{algorithm} finished in {iterations} iterations ({elapsed_time:.2f}s): P={objective:.6e} W")


def log_run_stall(algorithm: str, iteration: int, block: str, reason: str) -> None:
    """
    Log a block that kept its incumbent.

    Args:
        algorithm: Algorithm identifier
        iteration: Outer iteration index
        block: Name of the stalled block
        reason: Short reason
    """
    logger.warning(f"{algorithm} r={iteration}: {block} kept incumbent ({reason})")


def log_run_error(algorithm: str, error: str, elapsed_time: float) -> None:
    """
    Log a failed run.

    Args:
        algorithm: Algorithm identifier
        error: Error message
        elapsed_time: Execution time in seconds
    """
    logger.error(f"{algorithm} failed after {elapsed_time:.2f}s: {error}")
