"""Polar-to-Cartesian sector scan conversion.

Frames are beam-by-sample rasters (rows = beams, columns = range samples).
Each output pixel inside the sector owns an independent fractional
(sample, beam) subscript pair, so stochastic rounding here is per pixel:
draws are consumed in row-major order over inside pixels, sample subscript
before beam subscript.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidGeometry
from .raster import FrameSequence, Image
from .rng import DrawStream, substream
from .rounding import dr_array, sr_eq3_array


@dataclass(frozen=True)
class SectorGeometry:
    start_depth_mm: float
    end_depth_mm: float
    sector_span_deg: float
    beam_count: int
    samples_per_beam: int
    out_width: int
    out_height: int
    background: int = 0

    def __post_init__(self):
        if not 0 <= self.start_depth_mm < self.end_depth_mm:
            raise InvalidGeometry("need 0 <= start_depth < end_depth")
        if not 0 < self.sector_span_deg < 180:
            raise InvalidGeometry("sector span must be in (0, 180) degrees")
        if self.beam_count < 2 or self.samples_per_beam < 2:
            raise InvalidGeometry("need >= 2 beams and >= 2 samples per beam")
        if self.out_width < 1 or self.out_height < 1:
            raise InvalidGeometry("output raster must be >= 1x1")
        if not 0 <= self.background <= 255:
            raise InvalidGeometry("background must be an 8-bit gray level")

    @classmethod
    def from_json(cls, text: str) -> "SectorGeometry":
        return cls(**json.loads(text))

    def to_json(self) -> str:
        return json.dumps({
            "start_depth_mm": self.start_depth_mm,
            "end_depth_mm": self.end_depth_mm,
            "sector_span_deg": self.sector_span_deg,
            "beam_count": self.beam_count,
            "samples_per_beam": self.samples_per_beam,
            "out_width": self.out_width,
            "out_height": self.out_height,
            "background": self.background,
        }, indent=2)


@dataclass(frozen=True)
class PolarLookup:
    inside: np.ndarray          # (H, W) bool
    beam_subscript: np.ndarray  # (H, W) float, 1-based, valid where inside
    sample_subscript: np.ndarray


def build_lookup(geom: SectorGeometry) -> PolarLookup:
    """Map output pixel centers to fractional polar subscripts.

    Apex at top-center; depth axis points down and is scaled so end_depth
    lands on the bottom edge of the raster.  Angle is linear across beams,
    range linear across samples.
    """
    scale = geom.end_depth_mm / geom.out_height  # mm per pixel, isotropic
    zs = (np.arange(geom.out_height, dtype=np.float64) + 0.5) * scale
    xs = (np.arange(geom.out_width, dtype=np.float64) + 0.5 - geom.out_width / 2.0) * scale
    x, z = np.meshgrid(xs, zs)
    rho = np.hypot(x, z)
    theta = np.arctan2(x, z)
    half_span = math.radians(geom.sector_span_deg) / 2.0
    inside = ((rho >= geom.start_depth_mm) & (rho <= geom.end_depth_mm)
              & (np.abs(theta) <= half_span))
    beam = 1.0 + (theta + half_span) / (2.0 * half_span) * (geom.beam_count - 1)
    sample = 1.0 + ((rho - geom.start_depth_mm)
                    / (geom.end_depth_mm - geom.start_depth_mm)
                    * (geom.samples_per_beam - 1))
    return PolarLookup(inside=inside, beam_subscript=beam, sample_subscript=sample)


def sector_area_fraction(geom: SectorGeometry) -> float:
    """Closed-form annular-sector area over raster area, in physical units."""
    span = math.radians(geom.sector_span_deg)
    area = 0.5 * span * (geom.end_depth_mm ** 2 - geom.start_depth_mm ** 2)
    scale = geom.end_depth_mm / geom.out_height
    raster_area = (geom.out_width * scale) * (geom.out_height * scale)
    return area / raster_area


def _sample_polar(frame: np.ndarray, beam: np.ndarray, sample: np.ndarray,
                  method: str, stream: DrawStream | None) -> np.ndarray:
    """Interpolate the polar grid at fractional 1-based subscripts."""
    nb, ns = frame.shape
    if method == "nni-dr":
        bi = np.clip(dr_array(beam), 1, nb) - 1
        si = np.clip(dr_array(sample), 1, ns) - 1
        return frame[bi, si].astype(np.float64)
    if method == "nni-sr-eq3":
        if stream is None:
            raise ValueError("nni-sr-eq3 requires a draw stream")
        n = len(beam)
        rs = stream.next_r_array(2 * n)
        si = np.clip(sr_eq3_array(sample, rs[0::2]), 1, ns) - 1
        bi = np.clip(sr_eq3_array(beam, rs[1::2]), 1, nb) - 1
        return frame[bi, si].astype(np.float64)
    b = beam - 1.0
    s = sample - 1.0
    if method == "bilinear":
        b0 = np.floor(b).astype(np.int64)
        s0 = np.floor(s).astype(np.int64)
        wb = b - b0
        ws = s - s0
        out = np.zeros(len(b), dtype=np.float64)
        for db, wrow in ((0, 1.0 - wb), (1, wb)):
            bi = np.clip(b0 + db, 0, nb - 1)
            for ds, wcol in ((0, 1.0 - ws), (1, ws)):
                si = np.clip(s0 + ds, 0, ns - 1)
                out += wrow * wcol * frame[bi, si]
        return out
    if method == "bicubic":
        from .interp import _cubic_kernel
        b0 = np.floor(b).astype(np.int64)
        s0 = np.floor(s).astype(np.int64)
        fb = b - b0
        fs = s - s0
        out = np.zeros(len(b), dtype=np.float64)
        for db in range(-1, 3):
            bi = np.clip(b0 + db, 0, nb - 1)
            wrow = _cubic_kernel(fb - db)
            for ds in range(-1, 3):
                si = np.clip(s0 + ds, 0, ns - 1)
                out += wrow * _cubic_kernel(fs - ds) * frame[bi, si]
        return out
    raise ValueError(f"unknown method {method!r}")


def scan_convert(frame: Image, geom: SectorGeometry, method: str = "nni-dr",
                 stream: DrawStream | None = None,
                 lookup: PolarLookup | None = None) -> Image:
    """Convert one beam-by-sample frame to the Cartesian display raster."""
    if (frame.height, frame.width) != (geom.beam_count, geom.samples_per_beam):
        raise DimensionMismatch(
            f"frame {frame.height}x{frame.width} does not match geometry "
            f"{geom.beam_count} beams x {geom.samples_per_beam} samples")
    lut = lookup if lookup is not None else build_lookup(geom)
    out = np.full((geom.out_height, geom.out_width), geom.background, dtype=np.float64)
    mask = lut.inside
    values = _sample_polar(frame.samples.astype(np.float64),
                           lut.beam_subscript[mask], lut.sample_subscript[mask],
                           method, stream)
    out[mask] = values
    return Image.from_array(np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8))


def convert_sequence(frames: FrameSequence, geom: SectorGeometry,
                     method: str = "nni-dr", seed: int = 0) -> FrameSequence:
    """Per-frame scan conversion; each frame uses an independent substream
    derived from (seed, frame index) so results parallelize reproducibly."""
    lut = build_lookup(geom)
    converted = []
    for i, frame in enumerate(frames.frames):
        stream = substream(seed, i) if method.startswith("nni-sr") else None
        converted.append(scan_convert(frame, geom, method, stream, lookup=lut))
    return FrameSequence(width=geom.out_width, height=geom.out_height,
                         frame_rate_fps=frames.frame_rate_fps,
                         frames=tuple(converted))
