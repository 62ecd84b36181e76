"""Synthetic fixtures: natural-looking test images, input/reference pairs,
and a sector phantom so scan conversion is testable without acquisition data."""

from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter

from .raster import FrameSequence, Image
from .scanconv import SectorGeometry


def natural_image(width: int, height: int, seed: int = 0) -> Image:
    """Smooth textured field: band-limited noise plus a few soft blobs,
    stretched to the full 8-bit range."""
    rng = np.random.RandomState(seed)
    base = gaussian_filter(rng.standard_normal((height, width)), sigma=3.0)
    texture = gaussian_filter(rng.standard_normal((height, width)), sigma=1.0)
    field = base + 0.35 * texture
    for _ in range(6):
        cy, cx = rng.uniform(0, height), rng.uniform(0, width)
        radius = rng.uniform(min(width, height) / 12, min(width, height) / 4)
        yy, xx = np.mgrid[0:height, 0:width]
        field += rng.uniform(-1.5, 1.5) * np.exp(
            -((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * radius ** 2))
    field -= field.min()
    peak = field.max()
    if peak > 0:
        field = field / peak * 255.0
    return Image.from_array(np.floor(field + 0.5).astype(np.uint8))


def reference_pair(seed: int, ratio: int = 4, ref_size: int = 512) -> tuple[Image, Image]:
    """(input, reference) pair: the input subsamples the reference at every
    ratio-th pixel, mimicking a low-resolution capture of the same scene."""
    ref = natural_image(ref_size, ref_size, seed)
    inp = ref.samples[ratio - 1::ratio, ratio - 1::ratio]
    return Image.from_array(inp), ref


def add_noise(img: Image, sigma: float, seed: int = 0) -> Image:
    """Additive Gaussian noise, clamped to 8 bits."""
    if sigma <= 0:
        return img
    rng = np.random.RandomState(seed)
    noisy = img.samples.astype(np.float64) + rng.normal(0, sigma, img.samples.shape)
    return Image.from_array(np.clip(np.floor(noisy + 0.5), 0, 255).astype(np.uint8))


def sector_phantom(geom: SectorGeometry, frame_count: int = 8,
                   frame_rate_fps: float = 60.0, seed: int = 0) -> FrameSequence:
    """Polar-domain phantom: speckle-like texture with bright wire targets
    that drift slowly across frames."""
    rng = np.random.RandomState(seed)
    nb, ns = geom.beam_count, geom.samples_per_beam
    wires = [(rng.uniform(0.2, 0.8) * nb, rng.uniform(0.2, 0.8) * ns)
             for _ in range(5)]
    frames = []
    for t in range(frame_count):
        speckle = gaussian_filter(rng.rayleigh(1.0, (nb, ns)), sigma=1.0)
        field = speckle / max(speckle.max(), 1e-9) * 120.0
        yy, xx = np.mgrid[0:nb, 0:ns]
        for wb, wsample in wires:
            wb_t = wb + 0.3 * t
            field += 135.0 * np.exp(-((yy - wb_t) ** 2 + (xx - wsample) ** 2) / 4.0)
        frames.append(Image.from_array(np.clip(field, 0, 255).astype(np.uint8)))
    return FrameSequence(width=ns, height=nb, frame_rate_fps=frame_rate_fps,
                         frames=tuple(frames))
