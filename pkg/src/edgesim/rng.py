"""Deterministic random streams, keyed per device and purpose.

Philox is counter-based, so a (device, purpose) pair maps to an
independent substream regardless of how many draws any other stream has
consumed. That property is what makes the two engines produce identical
variates even though they interleave draws in different orders.
"""

from __future__ import annotations

import zlib

import numpy as np

_MASK64 = (1 << 64) - 1

# Stream purposes. Keep values stable: they are baked into the key and
# therefore into every frozen regression value.
PLACEMENT, DWELL, DESTINATION, LOAD, POLICY, PROFILE_ASSIGN = range(6)

N_PURPOSES = 6


def substream(seed: int, device: int, purpose: int) -> np.random.Generator:
    """Generator for one (device, purpose) pair under a run seed.

    The Philox key packs (device, purpose) into the high word and the
    run seed into the low word, so distinct pairs can never collide.
    """
    if not 0 <= purpose < N_PURPOSES:
        raise ValueError(f"unknown stream purpose: {purpose}")
    key = ((device << 3) | purpose) << 64 | (seed & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


class DeviceStreams:
    """Lazily built cache of a device's per-purpose generators."""

    __slots__ = ("seed", "device", "_gens")

    def __init__(self, seed: int, device: int) -> None:
        self.seed = seed
        self.device = device
        self._gens: dict[int, np.random.Generator] = {}

    def get(self, purpose: int) -> np.random.Generator:
        gen = self._gens.get(purpose)
        if gen is None:
            gen = substream(self.seed, self.device, purpose)
            self._gens[purpose] = gen
        return gen


def run_seed(master_seed: int, family: str, index: int) -> int:
    """Derive the seed for run `index` of a named run family.

    Families keep campaign arms independent: the same index in different
    families never shares a stream. Derivation goes through SeedSequence
    so nearby (family, index) pairs decorrelate.
    """
    tag = zlib.crc32(family.encode("utf-8"))
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(tag, index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
