"""Seeded, spawnable random number streams.

Every stochastic operation in the package takes an explicit seed and derives
independent child streams keyed by integers (item index, generation, retry
attempt, ...). Results are therefore reproducible bit-for-bit regardless of
evaluation order or worker count.
"""

from __future__ import annotations

import numpy as np


def stream(seed, *keys: int) -> np.random.Generator:
    """Return a Generator for the child stream identified by (seed, *keys).

    ``seed`` is either an int or a stream id tuple (entropy, *parent_keys);
    extra keys extend the tuple. The same id always yields the same stream,
    and distinct ids yield statistically independent streams.
    """
    if isinstance(seed, (tuple, list)):
        entropy, parent = int(seed[0]), tuple(int(k) for k in seed[1:])
    else:
        entropy, parent = int(seed), ()
    ss = np.random.SeedSequence(
        entropy=entropy, spawn_key=parent + tuple(int(k) for k in keys)
    )
    return np.random.Generator(np.random.PCG64(ss))


def substream_id(seed, *keys: int) -> tuple:
    """Compose a child stream id without instantiating the generator."""
    if isinstance(seed, (tuple, list)):
        return tuple(seed) + tuple(int(k) for k in keys)
    return (int(seed),) + tuple(int(k) for k in keys)
