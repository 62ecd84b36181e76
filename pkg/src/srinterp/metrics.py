"""Image quality metrics: MSE, PSNR, SSIM (full-reference) and PIQE
(no-reference, block-based) with the five-band quality scale."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import convolve1d

from .errors import DimensionMismatch, ImageTooSmall
from .raster import FrameSequence, Image

PIQE_BANDS = (
    (0, 20, "Excellent"),
    (21, 35, "Good"),
    (36, 50, "Fair"),
    (51, 80, "Poor"),
    (81, 100, "Bad"),
)


def _check_dims(a: Image, b: Image) -> None:
    if (a.width, a.height) != (b.width, b.height):
        raise DimensionMismatch(
            f"{a.width}x{a.height} vs {b.width}x{b.height}")


def mse(a: Image, b: Image) -> float:
    _check_dims(a, b)
    d = a.samples.astype(np.float64) - b.samples.astype(np.float64)
    return float(np.mean(d * d))


def psnr(a: Image, b: Image) -> float:
    """Peak SNR in dB; identical images yield +inf (serialized as null)."""
    m = mse(a, b)
    if m == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / m)


def _gaussian_window(radius: int, sigma: float) -> np.ndarray:
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def _filter_valid(arr: np.ndarray, k1d: np.ndarray) -> np.ndarray:
    r = len(k1d) // 2
    out = convolve1d(arr, k1d, axis=0, mode="nearest")
    out = convolve1d(out, k1d, axis=1, mode="nearest")
    return out[r:-r, r:-r]


def ssim(a: Image, b: Image) -> float:
    """Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), K1=0.01,
    K2=0.03, L=255, averaged over valid window positions."""
    _check_dims(a, b)
    if min(a.width, a.height) < 11:
        raise ImageTooSmall("SSIM needs both dimensions >= 11")
    x = a.samples.astype(np.float64)
    y = b.samples.astype(np.float64)
    k = _gaussian_window(5, 1.5)
    c1 = (0.01 * 255) ** 2
    c2 = (0.03 * 255) ** 2
    mu_x = _filter_valid(x, k)
    mu_y = _filter_valid(y, k)
    var_x = _filter_valid(x * x, k) - mu_x * mu_x
    var_y = _filter_valid(y * y, k) - mu_y * mu_y
    cov = _filter_valid(x * y, k) - mu_x * mu_y
    num = (2 * mu_x * mu_y + c1) * (2 * cov + c2)
    den = (mu_x ** 2 + mu_y ** 2 + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den))


@dataclass(frozen=True)
class PiqeResult:
    score: float
    label: str
    active_block_count: int
    distorted_block_ratio: float


def piqe_label(score: float) -> str:
    """Band label for a score; band membership is decided on round(score)."""
    s = math.floor(score + 0.5)
    for lo, hi, label in PIQE_BANDS:
        if lo <= s <= hi:
            return label
    return "Bad"


def _mscn(arr: np.ndarray) -> np.ndarray:
    # 7x7 Gaussian weights (sigma 7/6), replicate borders
    k = _gaussian_window(3, 7.0 / 6.0)

    def blur(a):
        a = convolve1d(a, k, axis=0, mode="nearest")
        return convolve1d(a, k, axis=1, mode="nearest")

    mu = blur(arr)
    sigma = np.sqrt(np.abs(blur(arr * arr) - mu * mu))
    return (arr - mu) / (sigma + 1.0)


def _block_view(arr: np.ndarray, bs: int) -> np.ndarray:
    h, w = arr.shape
    return arr.reshape(h // bs, bs, w // bs, bs).transpose(0, 2, 1, 3)


def _segment_stds(edge: np.ndarray, window: int) -> np.ndarray:
    # sliding windows of length `window`, stride 1, sample std per window
    n = edge.shape[-1]
    windows = np.stack([edge[..., i:i + window] for i in range(n - window + 1)],
                       axis=-2)
    return windows.std(axis=-1, ddof=1)


def piqe(img: Image, block_size: int = 16, activity_threshold: float = 0.1,
         impaired_threshold: float = 0.1, segment_window: int = 6) -> PiqeResult:
    """Block-based no-reference quality score in [0, 100] (lower is better).

    The image is trimmed to a multiple of the block size; MSCN coefficients
    are computed, spatially active blocks selected, and blocks showing
    noticeable edge artifacts or Gaussian-noise structure are penalized.
    """
    h = (img.height // block_size) * block_size
    w = (img.width // block_size) * block_size
    if h < 64 or w < 64:
        raise ImageTooSmall("PIQE needs >= 64x64 after trimming to a block multiple")
    arr = img.samples[:h, :w].astype(np.float64)
    mscn = _mscn(arr)
    blocks = _block_view(mscn, block_size)  # (bh, bw, bs, bs)
    bh, bw = blocks.shape[:2]
    flat = blocks.reshape(bh * bw, block_size, block_size)

    block_var = flat.var(axis=(1, 2), ddof=1)
    active = block_var > activity_threshold

    # noticeable-distortion criterion: any low-variance segment on an edge
    top = flat[:, 0, :]
    bottom = flat[:, block_size - 1, :]
    left = flat[:, :, 0]
    right = flat[:, :, block_size - 1]
    impaired = np.zeros(len(flat), dtype=bool)
    for edge in (top, right, bottom, left):
        impaired |= (_segment_stds(edge, segment_window) < impaired_threshold).any(axis=-1)

    # noise criterion: center-surround deviation vs block deviation
    block_sigma = np.sqrt(block_var)
    c1 = (block_size - 1 + 1) // 2  # center column pair, matching the
    c2 = c1 + 1                     # published block-center convention
    center = np.stack((flat[:, :, c1 - 1], flat[:, :, c2 - 1]), axis=-1)
    surround = np.delete(flat, c1 - 1, axis=2)
    surround = np.delete(surround, c2 - 1, axis=2)
    center_std = center.std(axis=(1, 2), ddof=1)
    surround_std = surround.std(axis=(1, 2), ddof=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        cen_sur_dev = np.nan_to_num(center_std / surround_std)
        beta = np.abs(block_sigma - cen_sur_dev) / np.maximum(block_sigma, cen_sur_dev)
    beta = np.nan_to_num(beta)
    noisy = block_sigma > 2.0 * beta

    dist_scores = (active & impaired) * (1.0 - block_var) + (active & noisy) * block_var
    n_active = int(active.sum())
    score = float((dist_scores.sum() + 1.0) / (1.0 + n_active) * 100.0)
    score = min(100.0, max(0.0, score))

    n_distorted = int((active & (impaired | noisy)).sum())
    ratio = n_distorted / n_active if n_active else 0.0
    return PiqeResult(score=score, label=piqe_label(score),
                      active_block_count=n_active, distorted_block_ratio=ratio)


def piqe_series(frames: FrameSequence, interval_ms: float) -> list[tuple[float, PiqeResult]]:
    """Evaluate the frame nearest each timestamp t = 0, interval, 2*interval,
    ... strictly below the sequence duration."""
    if interval_ms <= 0:
        raise ValueError("interval must be positive")
    duration = frames.duration_ms
    out = []
    t = 0.0
    k = 0
    while t < duration or k == 0:
        idx = min(frames.frame_count - 1,
                  int(math.floor(t / 1000.0 * frames.frame_rate_fps + 0.5)))
        out.append((t, piqe(frames.frames[idx])))
        k += 1
        t = k * interval_ms
        if k > 10 ** 6:
            break
    return out


def piqe_series_mean(series: list[tuple[float, PiqeResult]]) -> float:
    return float(np.mean([r.score for _, r in series]))
