"""Gaussian smoothing and unsharp masking, composed smooth-then-sharpen."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import convolve1d

from .raster import Image


@dataclass(frozen=True)
class FilterSettings:
    gaussian_sigma: float = 0.5
    gaussian_kernel_radius: int | None = None  # default ceil(2*sigma)
    unsharp_radius: float = 1.0
    unsharp_amount: float = 0.8
    unsharp_threshold: int = 0

    def __post_init__(self):
        if self.gaussian_sigma <= 0 or self.unsharp_radius <= 0:
            raise ValueError("sigma values must be positive")
        if self.unsharp_amount < 0:
            raise ValueError("amount must be >= 0")
        if not 0 <= self.unsharp_threshold <= 255:
            raise ValueError("threshold must be in [0, 255]")

    def to_dict(self) -> dict:
        return {
            "gaussian_sigma": self.gaussian_sigma,
            "gaussian_kernel_radius": self.radius_for(self.gaussian_sigma),
            "unsharp_radius": self.unsharp_radius,
            "unsharp_amount": self.unsharp_amount,
            "unsharp_threshold": self.unsharp_threshold,
        }

    def radius_for(self, sigma: float) -> int:
        if self.gaussian_kernel_radius is not None:
            return self.gaussian_kernel_radius
        return math.ceil(2 * sigma)


def gaussian_kernel(sigma: float, radius: int) -> np.ndarray:
    """Normalized 1-D Gaussian; weights are non-negative and sum to 1."""
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def _gaussian_blur_float(arr: np.ndarray, sigma: float, radius: int) -> np.ndarray:
    k = gaussian_kernel(sigma, radius)
    arr = convolve1d(arr, k, axis=0, mode="nearest")
    return convolve1d(arr, k, axis=1, mode="nearest")


def _quantize_u8(arr: np.ndarray) -> np.ndarray:
    return np.clip(np.floor(arr + 0.5), 0, 255).astype(np.uint8)


def gaussian_smooth(img: Image, settings: FilterSettings = FilterSettings()) -> Image:
    """Separable Gaussian smoothing with clamp-to-edge borders."""
    sigma = settings.gaussian_sigma
    blurred = _gaussian_blur_float(img.samples.astype(np.float64), sigma,
                                   settings.radius_for(sigma))
    return Image.from_array(_quantize_u8(blurred))


def unsharp_mask(img: Image, settings: FilterSettings = FilterSettings()) -> Image:
    """Sharpen by adding back the thresholded detail term.

    The internal blur stays in floating point; quantization happens once at
    the filter output.
    """
    arr = img.samples.astype(np.float64)
    sigma = settings.unsharp_radius
    blurred = _gaussian_blur_float(arr, sigma, math.ceil(2 * sigma))
    detail = arr - blurred
    if settings.unsharp_threshold > 0:
        detail = np.where(np.abs(detail) > settings.unsharp_threshold, detail, 0.0)
    return Image.from_array(_quantize_u8(arr + settings.unsharp_amount * detail))


def smooth_then_sharpen(img: Image, settings: FilterSettings = FilterSettings()) -> Image:
    """Fixed pipeline: Gaussian smoothing followed by unsharp masking."""
    return unsharp_mask(gaussian_smooth(img, settings), settings)
