"""
Channel synthesis: geometry, fading generators, random streams and text dumps.
"""

from aether.core.channels.generator import array_response, generate_channels, path_gain, rician_matrix
from aether.core.channels.geometry import Topology, sample_topology
from aether.core.channels.streams import Stage, split_algorithm_stream, stream

__all__ = [
    "Topology",
    "sample_topology",
    "array_response",
    "path_gain",
    "rician_matrix",
    "generate_channels",
    "Stage",
    "stream",
    "split_algorithm_stream",
]
