"""
Domain types, scenario configuration and physical-layer quantities.
"""

from aether.core.model.config import SystemConfig, load_system_config
from aether.core.model.feasibility import FeasibilityReport, check_feasibility
from aether.core.model.physics import (
    combined_gains,
    cross_sinr,
    effective_channel,
    harvested_power,
    sinr,
    total_power,
)
from aether.core.model.trace import BlockStatus, IterationRecord, IterationTrace
from aether.core.model.types import (
    AlgorithmId,
    Beamformers,
    ChannelSet,
    DecodingOrder,
    PhaseShift,
    PowerSplit,
    Solution,
    Termination,
)
from aether.core.model.units import dbm_to_watts, watts_to_dbm

__all__ = [
    "SystemConfig",
    "load_system_config",
    "ChannelSet",
    "PhaseShift",
    "Beamformers",
    "PowerSplit",
    "DecodingOrder",
    "Solution",
    "AlgorithmId",
    "Termination",
    "BlockStatus",
    "IterationRecord",
    "IterationTrace",
    "FeasibilityReport",
    "check_feasibility",
    "effective_channel",
    "combined_gains",
    "sinr",
    "cross_sinr",
    "harvested_power",
    "total_power",
    "dbm_to_watts",
    "watts_to_dbm",
]
