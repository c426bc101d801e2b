"""Seed derivation and counter-based random streams.

Every random draw in the package comes from a numpy ``Generator`` backed
by the Philox4x64-10 counter-based bit generator.  A stream is fully
identified by a 64-bit key; keys are derived from a master seed with the
SplitMix64 finalizer so that any implementation can rebuild them:

    mix64(z):
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   (mod 2**64)
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB   (mod 2**64)
        return z ^ (z >> 31)

    derive_seed(master, tag, index):
        h = mix64(master + GOLDEN * (tag + 1))     (mod 2**64)
        return mix64(h + GOLDEN * (index + 1))     (mod 2**64)

with ``GOLDEN = 0x9E3779B97F4A7C15``.  The stream for key ``k`` is
Philox4x64-10 with key words ``(k, 0)`` and counter starting at zero;
numpy increments the counter before producing its first block, so the
first four raw 64-bit outputs are ``philox4x64_10(ctr=(1,0,0,0), key=(k,0))``.

Test vectors (see ``tests/test_rng.py``):

    derive_seed(0, 0, 0)  == 0xa706dd2f4d197e6f
    Philox key 12345, first raw output == 0xa5792c0a0ed6a560
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

# purpose tags
FEATURES = 1
GROUND_TRUTH = 2
CORRUPTIONS = 3
EVALUATION = 4
CELL = 5


def mix64(z):
    """SplitMix64 finalizer on a 64-bit unsigned integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master, tag, index=0):
    """64-bit key for the ``index``-th stream of purpose ``tag``."""
    if not 0 <= master <= MASK64:
        raise ValueError("master seed must be a 64-bit unsigned integer")
    h = mix64((master + GOLDEN * (tag + 1)) & MASK64)
    return mix64((h + GOLDEN * (index + 1)) & MASK64)


def stream(key):
    """A fresh numpy Generator on the Philox stream with the given key."""
    return np.random.Generator(np.random.Philox(key=int(key) & MASK64))


def substream(master, tag, index=0):
    return stream(derive_seed(master, tag, index))
