"""Image container, PGM and raw frame-container codecs, histogram analysis."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (BadMagic, MalformedHeader, TruncatedPayload,
                     UnsupportedMaxval, ZeroFrames)

_SRIF_MAGIC = b"SRIF"
_SRIF_HEADER = struct.Struct("<4sIIId")


@dataclass(frozen=True)
class Image:
    """Immutable 8-bit grayscale raster, row-major."""

    width: int
    height: int
    samples: np.ndarray  # shape (height, width), uint8, read-only

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.uint8)
        if arr.shape != (self.height, self.width):
            raise ValueError(f"samples shape {arr.shape} != ({self.height}, {self.width})")
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be >= 1")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Image":
        arr = np.asarray(arr, dtype=np.uint8)
        return cls(width=arr.shape[1], height=arr.shape[0], samples=arr)

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return (self.width == other.width and self.height == other.height
                and np.array_equal(self.samples, other.samples))


@dataclass(frozen=True)
class Histogram:
    counts: tuple  # 256 non-negative ints
    total: int

    def __post_init__(self):
        if len(self.counts) != 256:
            raise ValueError("histogram needs exactly 256 bins")
        if sum(self.counts) != self.total:
            raise ValueError("histogram counts do not sum to total")


@dataclass(frozen=True)
class FrameSequence:
    """Fixed-size stack of grayscale frames with a frame rate, immutable."""

    width: int
    height: int
    frame_rate_fps: float
    frames: tuple = field(default_factory=tuple)  # tuple of Image

    def __post_init__(self):
        if not self.frames:
            raise ZeroFrames("frame sequence needs at least one frame")
        if self.frame_rate_fps <= 0:
            raise ValueError("frame rate must be positive")
        for f in self.frames:
            if f.width != self.width or f.height != self.height:
                raise ValueError("all frames must share dimensions")
        object.__setattr__(self, "frames", tuple(self.frames))

    @property
    def frame_count(self) -> int:
        return len(self.frames)

    @property
    def duration_ms(self) -> float:
        return self.frame_count / self.frame_rate_fps * 1000.0


def _read_pgm_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # skip whitespace and '#' comment lines between header tokens
    n = len(data)
    while pos < n:
        c = data[pos:pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            while pos < n and data[pos:pos + 1] != b"\n":
                pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos:pos + 1].isspace():
        pos += 1
    if start == pos:
        raise MalformedHeader("unexpected end of PGM header")
    return data[start:pos], pos


def read_pgm(data: bytes) -> Image:
    """Decode a binary (P5) PGM with maxval 255."""
    magic, pos = _read_pgm_token(data, 0)
    if magic != b"P5":
        raise MalformedHeader(f"expected P5 magic, got {magic!r}")
    fields = []
    for _ in range(3):
        tok, pos = _read_pgm_token(data, pos)
        try:
            fields.append(int(tok))
        except ValueError:
            raise MalformedHeader(f"non-numeric header field {tok!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise MalformedHeader("non-positive dimensions")
    if maxval != 255:
        raise UnsupportedMaxval(f"maxval must be 255, got {maxval}")
    pos += 1  # single whitespace byte after maxval
    payload = data[pos:pos + width * height]
    if len(payload) < width * height:
        raise TruncatedPayload(f"expected {width * height} bytes, got {len(payload)}")
    arr = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    return Image(width=width, height=height, samples=arr)


def write_pgm(img: Image) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.samples.tobytes()


def read_frames(data: bytes) -> FrameSequence:
    """Decode the SRIF raw frame container (little-endian, 24-byte header)."""
    if data[:4] != _SRIF_MAGIC:
        raise BadMagic(f"expected SRIF magic, got {data[:4]!r}")
    if len(data) < _SRIF_HEADER.size:
        raise TruncatedPayload("header truncated")
    _, width, height, frame_count, fps = _SRIF_HEADER.unpack_from(data, 0)
    if frame_count == 0:
        raise ZeroFrames("container declares zero frames")
    plane = width * height
    need = _SRIF_HEADER.size + plane * frame_count
    if len(data) < need:
        raise TruncatedPayload(f"expected {need} bytes, got {len(data)}")
    frames = []
    pos = _SRIF_HEADER.size
    for _ in range(frame_count):
        arr = np.frombuffer(data[pos:pos + plane], dtype=np.uint8).reshape(height, width)
        frames.append(Image(width=width, height=height, samples=arr))
        pos += plane
    return FrameSequence(width=width, height=height, frame_rate_fps=fps,
                         frames=tuple(frames))


def write_frames(seq: FrameSequence) -> bytes:
    header = _SRIF_HEADER.pack(_SRIF_MAGIC, seq.width, seq.height,
                               seq.frame_count, seq.frame_rate_fps)
    return header + b"".join(f.samples.tobytes() for f in seq.frames)


def histogram(img: Image) -> Histogram:
    counts = np.bincount(img.samples.ravel(), minlength=256)
    return Histogram(counts=tuple(int(c) for c in counts),
                     total=img.width * img.height)


def empty_bins(h: Histogram) -> set[int]:
    """Gray values with zero pixel count."""
    return {v for v, c in enumerate(h.counts) if c == 0}
