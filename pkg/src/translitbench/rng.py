"""Portable deterministic random number generation.

Every randomized operation in this package (sampling, splitting,
bootstrap resampling) must produce byte-identical results across
platforms and Python versions, so randomness comes from an explicit
xoshiro256** generator seeded through splitmix64 rather than from
``random`` or numpy's generators.  All arithmetic is modulo 2**64.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

# splitmix64 increment; also used to space substream seeds.
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state once; returns (new_state, output)."""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return state, z ^ (z >> 31)


def substream_seed(master_seed: int, index: int) -> int:
    """Seed of the index-th independent substream of a master seed.

    Defined as the splitmix64 output of ``master_seed + index * GOLDEN_GAMMA``
    so that substreams can be regenerated independently and in parallel.
    """
    _, out = splitmix64((master_seed + index * GOLDEN_GAMMA) & MASK64)
    return out


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256StarStar:
    """xoshiro256** with splitmix64 state expansion from a 64-bit seed."""

    def __init__(self, seed: int):
        state = seed & MASK64
        s = []
        for _ in range(4):
            state, out = splitmix64(state)
            s.append(out)
        self._s = s

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n), consuming exactly one generator output.

        Uses the fixed-point multiply method: bias is below n/2**64, which
        is never observable at corpus scale, and constant consumption keeps
        vectorized reimplementations in lockstep with this one.
        """
        if n <= 0:
            raise ValueError("randbelow requires n >= 1")
        return (self.next_u64() * n) >> 64

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle, iterating from the last index down."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]
