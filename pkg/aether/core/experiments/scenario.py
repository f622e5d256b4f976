"""
Reference scenario and single-draw construction.
"""

from typing import Any, Tuple

from aether.core.channels.generator import generate_channels
from aether.core.channels.geometry import Topology, sample_topology
from aether.core.channels.streams import Stage, stream
from aether.core.model.config import SystemConfig
from aether.core.model.types import ChannelSet


def default_config(**overrides: Any) -> SystemConfig:
    """
    Reference scenario.

    K=4 users, N=4 antennas, M=30 elements, users in a 200 m disc, BS at
    (0, 0, 15), IRS at (50, 50, 15), antenna noise -70 dBm, decoder noise
    -50 dBm, C0 = -30 dB, eta = 0.7, exponents (3, 2.2, 2.5), T = 1000,
    epsilon = 1e-3, SINR threshold 10 dB and energy threshold -10 dBm.
    """
    config = SystemConfig()
    return config.updated(**overrides) if overrides else config


def draw_scenario(config: SystemConfig, seed: int, draw: int) -> Tuple[Topology, ChannelSet]:
    """Topology and channels of one draw, from that draw's own streams"""
    topology = sample_topology(config, stream(seed, draw, Stage.TOPOLOGY))
    channels = generate_channels(config, topology, stream(seed, draw, Stage.CHANNEL), seed=seed)
    return topology, channels
