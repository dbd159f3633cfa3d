"""Deterministic, splittable random streams.

Every stochastic routine in the package draws from a stream keyed by
(master_seed, *path), where path is a tuple of integers such as a read
index or a recursion path. Streams are independent Philox counters, so
the order in which they are consumed (serial, parallel, or shuffled)
cannot change any individual stream's output.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def _entropy(master_seed: int, path: tuple[int, ...]) -> tuple[int, ...]:
    # SeedSequence wants non-negative ints; mask to uint64 range. The path
    # length is part of the key because SeedSequence treats trailing zero
    # entropy words as absent, which would alias (s,) with (s, 0).
    return tuple(int(x) & _MASK64 for x in (master_seed, len(path), *path))


def seed_sequence(master_seed: int, *path: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(_entropy(master_seed, path))


def stream(master_seed: int, *path: int) -> np.random.Generator:
    """Return the generator for (master_seed, *path).

    Same key, same bits, regardless of how many other streams were used
    in between.
    """
    return np.random.Generator(np.random.Philox(seed_sequence(master_seed, *path)))


def kernel_seed(master_seed: int, *path: int) -> int:
    """Derive a 32-bit seed for compiled kernels from the same key family."""
    return int(seed_sequence(master_seed, *path).generate_state(1, np.uint32)[0])


def derive_seed(master_seed: int, *path: int) -> int:
    """Derive a 63-bit master seed for a nested run (repetition, recursion node)."""
    state = seed_sequence(master_seed, *path).generate_state(1, np.uint64)[0]
    return int(state) & ((1 << 63) - 1)
