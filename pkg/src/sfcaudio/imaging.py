"""Waveform-to-image mapping and image serialization.

A clip is zero-padded to 4^k samples and scattered onto a 2^k x 2^k grid
along a space-filling curve; the original length rides along so decoding
is exact. Mixup blends two images convexly with a Beta-distributed
weight. Images serialize either as 16-bit PGM (lossy view) or as the
".sfci" raw format (lossless, stores the sample sequence in curve order).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .curves import MAX_ORDER, CurveKind, get_curve
from .signal import DEFAULT_SAMPLE_RATE, AudioClip

RAW_MAGIC = b"SFCI"
RAW_VERSION = 1
RAW_HEADER_SIZE = 12
RAW_HEADER = struct.Struct("<4sBBBBI")


class RawFormatError(ValueError):
    """Malformed .sfci input; ``offset`` is the failing byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class SfcImage:
    """2^k x 2^k pixel grid plus the metadata needed to invert it.

    ``pixels[y, x]`` holds the sample whose curve index maps to (x, y);
    ``length`` is the pre-padding sample count.
    """

    kind: CurveKind
    order: int
    length: int
    pixels: np.ndarray

    def __post_init__(self):
        kind = CurveKind(self.kind)
        if not 1 <= self.order <= MAX_ORDER:
            raise ValueError(f"order must be in [1, {MAX_ORDER}], got {self.order}")
        n = 1 << self.order
        pixels = np.asarray(self.pixels, dtype=np.float64)
        if pixels.shape != (n, n):
            raise ValueError(f"pixels must be {n}x{n}, got shape {pixels.shape}")
        if not 0 <= self.length <= n * n:
            raise ValueError(f"length {self.length} outside [0, {n * n}]")
        pixels = pixels.copy()
        pixels.flags.writeable = False
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "pixels", pixels)

    @property
    def n(self) -> int:
        return 1 << self.order


@dataclass(frozen=True)
class MixupParams:
    alpha: float = 0.2
    rng_seed: int = 0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")


def encode(clip: AudioClip, kind: CurveKind, order: int) -> SfcImage:
    """Scatter a clip onto the grid along the curve; pads the tail with zeros."""
    cm = get_curve(CurveKind(kind), order)
    if clip.length > cm.size:
        raise ValueError(f"clip of {clip.length} samples exceeds {cm.size} cells at order {order}")
    padded = np.zeros(cm.size, dtype=np.float64)
    padded[: clip.length] = clip.samples
    pixels = np.empty((cm.n, cm.n), dtype=np.float64)
    pixels[cm.ys, cm.xs] = padded
    return SfcImage(kind=cm.kind, order=cm.order, length=clip.length, pixels=pixels)


def decode(image: SfcImage, sample_rate: int = DEFAULT_SAMPLE_RATE) -> AudioClip:
    """Gather pixels in curve order and drop the padding."""
    cm = get_curve(image.kind, image.order)
    seq = image.pixels[cm.ys, cm.xs]
    return AudioClip(seq[: image.length], sample_rate)


def draw_mixup_lambdas(alpha: float, rng_seed: int, count: int = 1) -> np.ndarray:
    """Seeded Beta(alpha, alpha) draws, shared by mixup and batch drivers."""
    return np.random.default_rng(rng_seed).beta(alpha, alpha, size=count)


def mixup(a: SfcImage, b: SfcImage, params: MixupParams, lam: float | None = None):
    """Convex combination lam*a + (1-lam)*b of two matching images.

    ``lam`` is drawn from Beta(alpha, alpha) unless given explicitly
    (explicit values make recorded blends replayable). Returns the mixed
    image together with the weight so callers can blend labels the same
    way.
    """
    if (a.kind, a.order, a.length) != (b.kind, b.order, b.length):
        raise ValueError(
            f"mixup inputs disagree: ({a.kind.name}, k={a.order}, L={a.length}) vs "
            f"({b.kind.name}, k={b.order}, L={b.length})"
        )
    if lam is None:
        lam = float(draw_mixup_lambdas(params.alpha, params.rng_seed)[0])
    else:
        lam = float(lam)
    mixed = lam * a.pixels + (1.0 - lam) * b.pixels
    return SfcImage(kind=a.kind, order=a.order, length=a.length, pixels=mixed), lam


def export_pgm(image: SfcImage, path) -> None:
    """16-bit binary graymap; [-1, 1] maps linearly onto [0, 65535]."""
    scaled = np.rint((image.pixels + 1.0) / 2.0 * 65535.0)
    gray = np.clip(scaled, 0, 65535).astype(">u2")
    header = f"P5\n{image.n} {image.n}\n65535\n".encode("ascii")
    Path(path).write_bytes(header + gray.tobytes())


def export_raw(image: SfcImage, path) -> None:
    """Lossless .sfci file: 12-byte header, then float32 samples in curve order."""
    cm = get_curve(image.kind, image.order)
    seq = image.pixels[cm.ys, cm.xs].astype("<f4")
    header = RAW_HEADER.pack(
        RAW_MAGIC, RAW_VERSION, int(image.kind), image.order, 0, image.length
    )
    Path(path).write_bytes(header + seq.tobytes())


def import_raw(path) -> SfcImage:
    """Parse a .sfci file back into an image, validating every header field."""
    data = Path(path).read_bytes()
    if len(data) < RAW_HEADER_SIZE:
        raise RawFormatError(f"header needs {RAW_HEADER_SIZE} bytes, file has {len(data)}", 0)
    magic, version, kind_id, order, reserved, length = RAW_HEADER.unpack_from(data)
    if magic != RAW_MAGIC:
        raise RawFormatError(f"bad magic {magic!r}, expected {RAW_MAGIC!r}", 0)
    if version != RAW_VERSION:
        raise RawFormatError(f"unsupported version {version}", 4)
    try:
        kind = CurveKind(kind_id)
    except ValueError:
        raise RawFormatError(f"unknown curve id {kind_id}", 5) from None
    if not 1 <= order <= MAX_ORDER:
        raise RawFormatError(f"order {order} outside [1, {MAX_ORDER}]", 6)
    if reserved != 0:
        raise RawFormatError(f"reserved byte must be 0, got {reserved}", 7)
    cells = 1 << (2 * order)
    if length > cells:
        raise RawFormatError(f"length {length} exceeds {cells} cells at order {order}", 8)
    expected = 4 * cells
    got = len(data) - RAW_HEADER_SIZE
    if got != expected:
        raise RawFormatError(f"payload of {expected} bytes expected, got {got}", RAW_HEADER_SIZE)
    seq = np.frombuffer(data, dtype="<f4", offset=RAW_HEADER_SIZE).astype(np.float64)
    cm = get_curve(kind, order)
    pixels = np.empty((cm.n, cm.n), dtype=np.float64)
    pixels[cm.ys, cm.xs] = seq
    return SfcImage(kind=kind, order=order, length=length, pixels=pixels)
