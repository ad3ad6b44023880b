"""Seedable 64-bit RNG (SplitMix64) with exact integer-weight sampling.

Sampling decisions use only integer arithmetic: bounded draws are produced
by rejection from 64-bit words, and weighted choices walk a cumulative
integer weight table.  This keeps walk traces bit-reproducible.
"""

from __future__ import annotations

from bisect import bisect_right

_MASK = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 generator (Steele, Lea, Flood 2014 mixing constants)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_word(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def next_bit(self) -> int:
        return self.next_word() & 1

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection; unbiased for n < 2**64."""
        if n <= 0:
            raise ValueError("n must be positive")
        if n == 1:
            return 0
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_word()
            if r < limit:
                return r % n


def weighted_index(cumulative: list[int], rng: SplitMix64) -> int:
    """Pick index i with probability (cum[i] - cum[i-1]) / cum[-1]."""
    r = rng.randbelow(cumulative[-1])
    return bisect_right(cumulative, r)
