"""
Random stream management.

One root seed feeds every stream. Streams are addressed by
(seed, draw, stage) through ``SeedSequence`` spawn keys, so a sweep cell gets
the same randomness no matter which worker runs it or which value is swept.
"""

from enum import IntEnum
from typing import Tuple

import numpy as np


class Stage(IntEnum):
    TOPOLOGY = 0
    CHANNEL = 1
    ALGORITHM = 2


def stream(seed: int, draw: int, stage: Stage) -> np.random.Generator:
    """Independent generator for one (draw, stage) cell"""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(draw, int(stage))))


def split_algorithm_stream(rng: np.random.Generator) -> Tuple[np.random.Generator, np.random.Generator]:
    """Child streams for stage-1 and stage-2 randomization"""
    stage1, stage2 = rng.spawn(2)
    return stage1, stage2
