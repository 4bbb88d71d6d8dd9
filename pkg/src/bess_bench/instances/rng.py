"""
Seeded random generators.

Every consumer derives its own generator from the master seed, its indices
and a purpose tag, so a draw never depends on how many draws happened
elsewhere or in which order instances are generated.
"""

import zlib

import numpy as np


def tag_key(tag: str) -> int:
    """Stable 32-bit key of a purpose tag."""
    return zlib.crc32(tag.encode("utf-8"))


def child_rng(master_seed: int, *indices, tag: str = "") -> np.random.Generator:
    """
    Generator for ``(master_seed, *indices, tag)``.

    Parameters:
    -----------
    master_seed : int
        Experiment seed
    indices : int
        Position of the consumer, e.g. ``(n_bess, instance_index)``
    tag : str
        Purpose of the stream (``"spt"``, ``"tep"``, ``"solar"`` ...)
    """
    key = tuple(int(i) for i in indices) + (tag_key(tag),)
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=key)
    return np.random.default_rng(seq)
