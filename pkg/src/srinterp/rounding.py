"""Subscript rounding strategies.

All strategies map a positive fractional subscript to a non-zero positive
integer source index.  Deterministic rounding (DR) is the ceil function;
the stochastic strategy sr_eq3 rounds with ceil(x - r) for a quantized
random r in [0, 0.5], with integers passing through and the exceptional
x <= r case rounding up.  Two literature stochastic modes (fair coin and
distance-proportional) are kept as baselines.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .rng import DrawStream

_INT_EPS = 1e-9


class RoundingStrategy(enum.Enum):
    DR_CEIL = "dr"
    FLOOR = "floor"
    SR_EQ3 = "sr-eq3"
    SR_MODE1 = "sr-mode1"
    SR_MODE2 = "sr-mode2"

    @property
    def stochastic(self) -> bool:
        return self in (RoundingStrategy.SR_EQ3, RoundingStrategy.SR_MODE1,
                        RoundingStrategy.SR_MODE2)


@dataclass(frozen=True)
class RoundingOutcome:
    index: int
    strategy: RoundingStrategy
    r_used: float | None = None
    p_used: float | None = None


def _is_integer(x: float) -> bool:
    return abs(x - round(x)) < _INT_EPS


def _ceil(x: float) -> int:
    # snap to 9 decimals so float noise on exact grid points cannot flip
    # the ceiling (subscripts are i/ratio, draws are one-decimal)
    return math.ceil(round(x, 9))


def dr(x: float) -> RoundingOutcome:
    """Deterministic rounding: ceil(x)."""
    if x <= 0:
        raise ValueError(f"subscript must be positive, got {x}")
    return RoundingOutcome(_ceil(x), RoundingStrategy.DR_CEIL)


def floor_round(x: float) -> RoundingOutcome:
    """Floor, clamped to 1 so the output stays a valid subscript."""
    if x <= 0:
        raise ValueError(f"subscript must be positive, got {x}")
    return RoundingOutcome(max(1, math.floor(round(x, 9))), RoundingStrategy.FLOOR)


def sr_eq3(x: float, r: float) -> RoundingOutcome:
    """Stochastic rounding with a quantized draw r in {0.0, ..., 0.5}.

    Integers pass through.  Fractional x > r rounds to ceil(x - r); the
    exceptional fractional x <= r rounds up so the output never reaches 0.
    """
    if x <= 0:
        raise ValueError(f"subscript must be positive, got {x}")
    if _is_integer(x):
        index = round(x)
    elif x > r:
        index = max(1, _ceil(x - r))
    else:
        index = _ceil(x)
    return RoundingOutcome(index, RoundingStrategy.SR_EQ3, r_used=r)


def sr_mode1(x: float, stream: DrawStream) -> RoundingOutcome:
    """Round up or down with equal probability; integers pass through."""
    if x <= 0:
        raise ValueError(f"subscript must be positive, got {x}")
    u = stream.next_uniform()
    if _is_integer(x):
        index = round(x)
    else:
        index = _ceil(x) if u < 0.5 else max(1, math.floor(x))
    return RoundingOutcome(index, RoundingStrategy.SR_MODE1)


def sr_mode2(x: float, stream: DrawStream) -> RoundingOutcome:
    """Round up with probability equal to the fractional part of x."""
    if x <= 0:
        raise ValueError(f"subscript must be positive, got {x}")
    u = stream.next_uniform()
    if _is_integer(x):
        return RoundingOutcome(round(x), RoundingStrategy.SR_MODE2, p_used=0.0)
    p = x - math.floor(x)
    index = _ceil(x) if u < p else max(1, math.floor(x))
    return RoundingOutcome(index, RoundingStrategy.SR_MODE2, p_used=p)


def round_subscript_vector(xs, strategy: RoundingStrategy,
                           stream: DrawStream | None = None) -> list[RoundingOutcome]:
    """Element-wise rounding, consuming one draw per element for stochastic
    strategies (drawn and ignored on integer subscripts, so injected streams
    stay row-aligned with published tables)."""
    out = []
    for x in xs:
        if strategy is RoundingStrategy.DR_CEIL:
            out.append(dr(x))
        elif strategy is RoundingStrategy.FLOOR:
            out.append(floor_round(x))
        elif strategy is RoundingStrategy.SR_EQ3:
            out.append(sr_eq3(x, stream.next_r()))
        elif strategy is RoundingStrategy.SR_MODE1:
            out.append(sr_mode1(x, stream))
        elif strategy is RoundingStrategy.SR_MODE2:
            out.append(sr_mode2(x, stream))
        else:
            raise ValueError(f"unknown strategy {strategy}")
    return out


def sr_eq3_array(xs: np.ndarray, rs: np.ndarray) -> np.ndarray:
    """Vectorized sr_eq3 over matching arrays of subscripts and draws."""
    xs = np.asarray(xs, dtype=np.float64)
    rs = np.asarray(rs, dtype=np.float64)
    nearest = np.round(xs)
    is_int = np.abs(xs - nearest) < _INT_EPS
    ceil_x = np.ceil(np.round(xs, 9)).astype(np.int64)
    shifted = np.maximum(1, np.ceil(np.round(xs - rs, 9)).astype(np.int64))
    out = np.where(xs > rs, shifted, ceil_x)
    return np.where(is_int, nearest.astype(np.int64), out)


def dr_array(xs: np.ndarray) -> np.ndarray:
    """Vectorized ceil rounding."""
    return np.ceil(np.round(np.asarray(xs, dtype=np.float64), 9)).astype(np.int64)
