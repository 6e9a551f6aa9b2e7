"""Seed derivation.

A master seed fans out into independent streams keyed by integer tuples, so a
trial's randomness depends only on its key and never on execution order.
"""

from typing import Sequence

import numpy as np

# Purpose codes appended to spawn keys
SIMULATION = 0
GRAPH = 1
PILOT = 2


def derive_seed(master_seed: int, key: Sequence[int]) -> int:
    """Deterministic 63-bit child seed for ``key`` under ``master_seed``."""
    sequence = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in key))
    return int(sequence.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def make_rng(seed: int, purpose: int = SIMULATION) -> np.random.Generator:
    """Counter-based generator for one (seed, purpose) stream."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(purpose),))
    return np.random.Generator(np.random.Philox(sequence))
