"""Tiny deterministic PRNG with a canonical, serializable state.

The simulator needs very little randomness (serve-side selection), but what
it uses must replay bit-for-bit across platforms and survive a round trip
through a state snapshot. ``random.Random`` carries ~2.5 KB of Mersenne
state, which makes canonical snapshots awkward; splitmix64 carries 8 bytes.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 generator. State is a single 64-bit integer."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_bit(self) -> int:
        return self.next_u64() >> 63

    def copy(self) -> "SplitMix64":
        other = SplitMix64.__new__(SplitMix64)
        other.state = self.state
        return other

    def state_hex(self) -> str:
        """Canonical 16-character lowercase hex encoding of the state."""
        return f"{self.state:016x}"

    @classmethod
    def from_state_hex(cls, text: str) -> "SplitMix64":
        if len(text) != 16:
            raise ValueError(f"rng state must be 16 hex chars, got {text!r}")
        rng = cls.__new__(cls)
        rng.state = int(text, 16)
        return rng

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SplitMix64) and other.state == self.state

    def __repr__(self) -> str:
        return f"SplitMix64(0x{self.state:016x})"
