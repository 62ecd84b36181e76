"""Upscaling: NNI with pluggable subscript rounding, plus bilinear/bicubic.

The destination grid uses 1-based subscripts x_i = i / ratio, so at integer
ratios every source index is hit and NNI outputs contain only source values
(the non-extra-pixel property).  Bilinear and bicubic sample the same grid
with clamp-to-edge neighborhoods and create intermediate values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .raster import Image
from .rng import DrawStream
from .rounding import RoundingStrategy, round_subscript_vector

METHODS = ("nni-dr", "nni-sr-eq3", "nni-sr-mode1", "nni-sr-mode2",
           "bilinear", "bicubic")

_NNI_STRATEGY = {
    "nni-dr": RoundingStrategy.DR_CEIL,
    "nni-sr-eq3": RoundingStrategy.SR_EQ3,
    "nni-sr-mode1": RoundingStrategy.SR_MODE1,
    "nni-sr-mode2": RoundingStrategy.SR_MODE2,
}


@dataclass(frozen=True)
class SubscriptMap:
    ratio: float
    dest_len: int
    src_indices: tuple  # 1-based ints, length dest_len


def subscripts(src_len: int, ratio: float) -> list[float]:
    """Pre-rounding destination subscripts x_i = i/ratio for i = 1..dest_len."""
    dest_len = math.floor(src_len * ratio + 1e-9)
    return [i / ratio for i in range(1, dest_len + 1)]


def build_subscript_map(src_len: int, ratio: float,
                        strategy: RoundingStrategy,
                        stream: DrawStream | None = None) -> SubscriptMap:
    if src_len < 1:
        raise ValueError("src_len must be >= 1")
    if ratio < 1:
        raise ValueError("ratio must be >= 1")
    xs = subscripts(src_len, ratio)
    outcomes = round_subscript_vector(xs, strategy, stream)
    indices = tuple(min(src_len, max(1, o.index)) for o in outcomes)
    return SubscriptMap(ratio=ratio, dest_len=len(indices), src_indices=indices)


def nni_upscale(source: Image, ratio: float, method: str = "nni-dr",
                stream: DrawStream | None = None) -> Image:
    """Nearest-neighbor upscale; row map is built (and draws consumed) before
    the column map."""
    strategy = _NNI_STRATEGY[method]
    if strategy.stochastic and stream is None:
        raise ValueError(f"method {method} requires a draw stream")
    row_map = build_subscript_map(source.height, ratio, strategy, stream)
    col_map = build_subscript_map(source.width, ratio, strategy, stream)
    rows = np.asarray(row_map.src_indices) - 1
    cols = np.asarray(col_map.src_indices) - 1
    return Image.from_array(source.samples[np.ix_(rows, cols)])


def _quantize_u8(arr: np.ndarray) -> np.ndarray:
    return np.clip(np.floor(arr + 0.5), 0, 255).astype(np.uint8)


def _axis_positions(src_len: int, dest_len: int, ratio: float) -> np.ndarray:
    # 0-based fractional source coordinates for each destination index
    return np.arange(1, dest_len + 1, dtype=np.float64) / ratio - 1.0


def _bilinear_1d(src: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Linear resample along axis 0 at fractional 0-based positions,
    clamp-to-edge."""
    n = src.shape[0]
    i0 = np.floor(positions).astype(np.int64)
    w = positions - i0
    lo = np.clip(i0, 0, n - 1)
    hi = np.clip(i0 + 1, 0, n - 1)
    return src[lo] * (1.0 - w)[:, None] + src[hi] * w[:, None]


def _cubic_kernel(t: np.ndarray, a: float = -0.5) -> np.ndarray:
    t = np.abs(t)
    t2 = t * t
    t3 = t2 * t
    out = np.where(t <= 1.0,
                   (a + 2) * t3 - (a + 3) * t2 + 1,
                   np.where(t < 2.0, a * t3 - 5 * a * t2 + 8 * a * t - 4 * a, 0.0))
    return out


def _bicubic_1d(src: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Cubic-convolution resample (a = -0.5) along axis 0, clamp-to-edge."""
    n = src.shape[0]
    base = np.floor(positions).astype(np.int64)
    frac = positions - base
    out = np.zeros((len(positions),) + src.shape[1:], dtype=np.float64)
    for k in range(-1, 3):
        idx = np.clip(base + k, 0, n - 1)
        w = _cubic_kernel(frac - k)
        out += src[idx] * w[:, None]
    return out


def _separable_upscale(source: Image, ratio: float, resample_1d) -> Image:
    arr = source.samples.astype(np.float64)
    rows = _axis_positions(source.height, math.floor(source.height * ratio + 1e-9), ratio)
    cols = _axis_positions(source.width, math.floor(source.width * ratio + 1e-9), ratio)
    arr = resample_1d(arr, rows)
    arr = resample_1d(arr.T, cols).T
    return Image.from_array(_quantize_u8(arr))


def bilinear_upscale(source: Image, ratio: float) -> Image:
    if ratio < 1:
        raise ValueError("ratio must be >= 1")
    return _separable_upscale(source, ratio, _bilinear_1d)


def bicubic_upscale(source: Image, ratio: float) -> Image:
    if ratio < 1:
        raise ValueError("ratio must be >= 1")
    return _separable_upscale(source, ratio, _bicubic_1d)


def upscale(source: Image, ratio: float, method: str,
            stream: DrawStream | None = None) -> Image:
    """Dispatch over the six supported methods."""
    if method in _NNI_STRATEGY:
        return nni_upscale(source, ratio, method, stream)
    if method == "bilinear":
        return bilinear_upscale(source, ratio)
    if method == "bicubic":
        return bicubic_upscale(source, ratio)
    raise ValueError(f"unknown method {method!r}")
