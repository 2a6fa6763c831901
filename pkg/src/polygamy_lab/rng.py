"""Counter-based, splittable random streams.

Every stochastic routine in the package draws from a Philox generator keyed
by ``(master_seed, *path)`` where ``path`` is a tuple of small integers
(trial index, restart index, purpose tag, ...).  Streams derived this way
are independent of execution order and of worker parallelism, which is what
makes audits reproducible byte-for-byte.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def seed_sequence(master_seed: int, *path: int) -> np.random.SeedSequence:
    """SeedSequence for the stream addressed by ``(master_seed, *path)``."""
    return np.random.SeedSequence(
        entropy=int(master_seed) & _MASK64,
        spawn_key=tuple(int(p) & _MASK64 for p in path),
    )


def stream(master_seed: int, *path: int) -> np.random.Generator:
    """Philox generator for the stream addressed by ``(master_seed, *path)``."""
    return np.random.Generator(np.random.Philox(seed_sequence(master_seed, *path)))


def child_seed(master_seed: int, *path: int) -> int:
    """A 64-bit seed deterministically derived from ``(master_seed, *path)``."""
    return int(seed_sequence(master_seed, *path).generate_state(1, np.uint64)[0])
