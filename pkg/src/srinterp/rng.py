"""MT19937 generator and the quantized draw stream feeding stochastic rounding.

The draw stream emits values r rounded half-up to one decimal and tuned to
lie in {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}.  Streams can also be built from an
injected sequence of draws so that published rounding tables replay exactly.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import InjectedStreamExhausted

_N = 624
_M = 397
_MATRIX_A = np.uint32(0x9908B0DF)
_UPPER = np.uint32(0x80000000)
_LOWER = np.uint32(0x7FFFFFFF)

R_VALUES = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5)


class Mt19937:
    """32-bit Mersenne Twister seeded with the scalar init_genrand recurrence.

    Same seed always yields the identical word stream; words are produced in
    tempered blocks of 624 so bulk draws stay cheap.
    """

    def __init__(self, seed: int):
        seed = int(seed) & 0xFFFFFFFF
        self.seed = seed
        mt = np.empty(_N, dtype=np.uint64)
        mt[0] = seed
        for i in range(1, _N):
            mt[i] = (1812433253 * (int(mt[i - 1]) ^ (int(mt[i - 1]) >> 30)) + i) & 0xFFFFFFFF
        self._mt = mt.astype(np.uint32)
        self._buffer = np.empty(0, dtype=np.uint32)
        self._pos = 0

    def _twist(self) -> None:
        mt = self._mt
        # Wave boundaries chosen so each wave's mt[kk + M mod N] source words
        # are already final (matches the sequential reference update order).
        for lo, hi in ((0, _N - _M), (_N - _M, 2 * (_N - _M)), (2 * (_N - _M), _N - 1)):
            y = (mt[lo:hi] & _UPPER) | (mt[lo + 1:hi + 1] & _LOWER)
            src = mt[lo + _M:hi + _M] if hi + _M <= _N else mt[lo + _M - _N:hi + _M - _N]
            mt[lo:hi] = src ^ (y >> np.uint32(1)) ^ np.where(y & np.uint32(1), _MATRIX_A, np.uint32(0))
        y = (mt[_N - 1] & _UPPER) | (mt[0] & _LOWER)
        mt[_N - 1] = mt[_M - 1] ^ (y >> np.uint32(1)) ^ (_MATRIX_A if y & np.uint32(1) else np.uint32(0))

    def _refill(self) -> None:
        self._twist()
        y = self._mt.copy()
        y ^= y >> np.uint32(11)
        y ^= (y << np.uint32(7)) & np.uint32(0x9D2C5680)
        y ^= (y << np.uint32(15)) & np.uint32(0xEFC60000)
        y ^= y >> np.uint32(18)
        self._buffer = y
        self._pos = 0

    def next_u32(self) -> int:
        if self._pos >= len(self._buffer):
            self._refill()
        word = int(self._buffer[self._pos])
        self._pos += 1
        return word

    def next_u32_array(self, n: int) -> np.ndarray:
        out = np.empty(n, dtype=np.uint32)
        filled = 0
        while filled < n:
            if self._pos >= len(self._buffer):
                self._refill()
            take = min(n - filled, len(self._buffer) - self._pos)
            out[filled:filled + take] = self._buffer[self._pos:self._pos + take]
            self._pos += take
            filled += take
        return out


def quantize_r(u: float) -> float:
    """Map a uniform [0,1) real onto the one-decimal grid in [0, 0.5], half-up."""
    return math.floor(u * 5.0 + 0.5) / 10.0


def _is_quantized(value: float) -> bool:
    return 0.0 <= value <= 0.5 and abs(value * 10 - round(value * 10)) < 1e-9


class DrawStream:
    """Ordered source of random draws for the stochastic rounding strategies.

    Seeded mode derives everything from one MT19937 generator; injected mode
    replays a fixed sequence verbatim and raises once it runs out.
    """

    def __init__(self, *, generator: Mt19937 | None = None,
                 injected: Sequence[float] | None = None):
        if (generator is None) == (injected is None):
            raise ValueError("exactly one of generator/injected must be given")
        self._gen = generator
        self._injected = list(injected) if injected is not None else None
        self.draws_emitted = 0
        if self._injected is not None:
            for v in self._injected:
                if not 0.0 <= v < 1.0 and not _is_quantized(v):
                    raise ValueError(f"injected draw {v!r} outside [0, 1)")

    @classmethod
    def from_seed(cls, seed: int) -> "DrawStream":
        return cls(generator=Mt19937(seed))

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "DrawStream":
        return cls(injected=list(values))

    @property
    def seed(self) -> int | None:
        return self._gen.seed if self._gen is not None else None

    def _next_injected(self) -> float:
        assert self._injected is not None
        if self.draws_emitted >= len(self._injected):
            raise InjectedStreamExhausted(
                f"injected sequence of {len(self._injected)} draws exhausted")
        v = self._injected[self.draws_emitted]
        self.draws_emitted += 1
        return v

    def next_uniform(self) -> float:
        """Raw uniform draw in [0, 1); injected values pass through unquantized."""
        if self._injected is not None:
            return self._next_injected()
        self.draws_emitted += 1
        return self._gen.next_u32() / 2.0 ** 32

    def next_r(self) -> float:
        """One-decimal quantized draw in {0.0, ..., 0.5}."""
        if self._injected is not None:
            v = self._next_injected()
            if not _is_quantized(v):
                raise ValueError(f"injected draw {v!r} is not one-decimal in [0, 0.5]")
            return round(v, 1)
        self.draws_emitted += 1
        return quantize_r(self._gen.next_u32() / 2.0 ** 32)

    def next_r_array(self, n: int) -> np.ndarray:
        """n quantized draws in emission order (bulk form of next_r)."""
        if self._injected is not None:
            return np.array([self.next_r() for _ in range(n)], dtype=np.float64)
        u = self._gen.next_u32_array(n).astype(np.float64) / 2.0 ** 32
        self.draws_emitted += n
        return np.floor(u * 5.0 + 0.5) / 10.0

    def next_uniform_array(self, n: int) -> np.ndarray:
        if self._injected is not None:
            return np.array([self.next_uniform() for _ in range(n)], dtype=np.float64)
        u = self._gen.next_u32_array(n).astype(np.float64) / 2.0 ** 32
        self.draws_emitted += n
        return u


def _mix32(a: int, b: int) -> int:
    """splitmix-style mix of two 32-bit values into one 32-bit subseed."""
    z = (a * 0x9E3779B9 + b + 0x85EBCA6B) & 0xFFFFFFFF
    z ^= z >> 16
    z = (z * 0x21F0AAAD) & 0xFFFFFFFF
    z ^= z >> 15
    z = (z * 0x735A2D97) & 0xFFFFFFFF
    z ^= z >> 15
    return z


def substream(seed: int, index: int) -> DrawStream:
    """Independent per-index stream derived from (seed, index).

    Used for per-frame conversion so frames reproduce in isolation and in
    parallel without sharing one sequential stream.
    """
    return DrawStream.from_seed(_mix32(int(seed) & 0xFFFFFFFF, int(index)))


def read_r_file(text: str) -> list[float]:
    """Parse an injected-draw file: one value per line, '#' comments allowed."""
    values = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            values.append(float(line))
    return values
