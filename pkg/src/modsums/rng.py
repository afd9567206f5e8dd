"""Deterministic pseudo-random numbers for sweeps and generators.

A self-contained splitmix64 generator: 64 bits of state, advanced by the
golden-ratio increment, output mixed by two xor-shift/multiply rounds.
The same seed produces the same stream on every platform and Python
version, which is what makes report files byte-for-byte reproducible.

Substreams for independent grid cells are derived with ``derive``; the
derivation only depends on the seed and the cell indices, never on
execution order, so parallel sweeps stay deterministic.
"""

from __future__ import annotations

__all__ = ["SplitMix64", "derive"]

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def derive(seed: int, *indices: int) -> int:
    """Derive a substream seed from a base seed and cell indices."""
    z = seed & _MASK
    for ix in indices:
        z = _mix((z + _GAMMA) & _MASK) ^ _mix((ix * 0xD6E8FEB86659FD93) & _MASK)
        z &= _MASK
    return z


class SplitMix64:
    """splitmix64 stream with convenience draws used by the sweeps."""

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK

    def u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix(self._state)

    def uniform(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.u64() >> 11) * (1.0 / (1 << 53))

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n).  Modulo draw; the bias at n far
        below 2**64 is negligible for sweep sampling and keeps the
        stream layout simple and portable."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        return self.u64() % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.randrange(hi - lo + 1)

    def choice(self, seq):
        if not seq:
            raise ValueError("empty sequence")
        return seq[self.randrange(len(seq))]

    def spawn(self, *indices: int) -> "SplitMix64":
        """Independent substream for a grid cell."""
        return SplitMix64(derive(self._state, *indices))
