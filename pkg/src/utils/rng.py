"""
Seed derivation for independent, order-free random streams.

Each stream is keyed by a tag built from the base seed and a few labels
(matchup key, game index, episode, ...), hashed with CRC-32 so the result is
stable across processes.
"""
import zlib

import numpy as np


def derive_seed(base_seed: int, *parts: object) -> int:
    tag = ":".join(str(p) for p in (int(base_seed),) + parts)
    return zlib.crc32(tag.encode("utf-8")) & 0xFFFFFFFF


def make_rng(base_seed: int, *parts: object) -> np.random.Generator:
    """Independent numpy generator for one labelled stream"""
    return np.random.default_rng(derive_seed(base_seed, *parts))
