"""Seedable, splittable random numbers shared by Python code and numba kernels.

The generator is the 64-bit linear congruential recurrence used by the
Word2Vec C tool::

    state <- state * 25214903917 + 11   (mod 2**64)

Low-order bits of a power-of-two LCG have short periods, so draws only ever
use high bits: integers come from ``state >> 16`` and uniforms in ``[0, 1)``
from ``(state >> 11) / 2**53``.  Independent streams (one per training worker)
are derived by hashing ``(seed, stream id)`` with SplitMix64.
"""

import numpy as np
from numba import njit

MULTIPLIER = 25214903917
INCREMENT = 11
_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x):
    z = (x + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def stream_seed(seed, stream):
    """Seed for stream ``stream`` (e.g. a worker id) of global ``seed``."""
    return splitmix64((int(seed) & _MASK) ^ splitmix64(int(stream) & _MASK))


class Lcg:
    """Pure-Python twin of the kernel generator; bit-identical draws."""

    def __init__(self, seed):
        self.state = int(seed) & _MASK

    def next(self):
        self.state = (self.state * MULTIPLIER + INCREMENT) & _MASK
        return self.state

    def randint(self, n):
        """Uniform integer in ``[0, n)``."""
        return (self.next() >> 16) % n

    def uniform(self):
        return (self.next() >> 11) * (1.0 / 9007199254740992.0)

    def split(self, stream):
        return Lcg(stream_seed(self.state, stream))


@njit(cache=True, inline="always")
def lcg_next(state):
    return state * np.uint64(MULTIPLIER) + np.uint64(INCREMENT)


@njit(cache=True, inline="always")
def lcg_randint(state, n):
    return np.int64((state >> np.uint64(16)) % np.uint64(n))


@njit(cache=True, inline="always")
def lcg_uniform(state):
    return np.float64(state >> np.uint64(11)) * (1.0 / 9007199254740992.0)
