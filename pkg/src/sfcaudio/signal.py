"""Audio clip loading and time-domain preprocessing.

Clips are mono float sequences in [-1, 1]. Two preprocessing steps are
provided: energy-based centering (align the loud part of the clip with
the frame middle) and seeded random time shifting. Both translate with
zero fill: content pushed past a frame edge is dropped, nothing wraps
around.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_SAMPLE_RATE = 16000


class WavError(ValueError):
    """Base class for WAV loading failures."""


class WavFormatError(WavError):
    """Not a parseable RIFF/WAVE container."""


class WavTruncatedError(WavError):
    """File ends before its declared chunk sizes are satisfied."""


class WavSampleRateError(WavError):
    """Sample rate other than 16000 Hz."""


class WavChannelError(WavError):
    """More than one channel."""


class WavEncodingError(WavError):
    """Codec other than 16-bit PCM or 32-bit float."""


@dataclass(frozen=True)
class AudioClip:
    """Mono waveform. ``samples`` is an immutable float64 vector."""

    samples: np.ndarray
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"samples must be 1-D, got shape {samples.shape}")
        if int(self.sample_rate) <= 0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate}")
        samples = samples.copy()
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    @property
    def length(self) -> int:
        return self.samples.shape[0]


@dataclass(frozen=True)
class CenterParams:
    """Energy-window parameters for :func:`center`."""

    w: int = 100
    sigma: float = 25.0
    th: float = 0.0001

    def __post_init__(self):
        if self.w <= 0:
            raise ValueError("window size w must be positive")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.th < 0:
            raise ValueError("threshold must be nonnegative")


@dataclass(frozen=True)
class ShiftParams:
    max_shift: int
    rng_seed: int = 0

    def __post_init__(self):
        if self.max_shift < 0:
            raise ValueError("max_shift must be nonnegative")


def load_wav(path) -> AudioClip:
    """Read a mono 16 kHz WAV file (16-bit PCM or 32-bit float).

    PCM samples are scaled by 1/32768 so the int16 range maps into
    [-1, 1); float samples pass through unchanged. Anything else raises
    a specific :class:`WavError` subclass.
    """
    data = Path(path).read_bytes()
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    payload = None
    pos = 12
    while pos + 8 <= len(data):
        cid, size = struct.unpack_from("<4sI", data, pos)
        pos += 8
        if pos + size > len(data):
            raise WavTruncatedError(
                f"{path}: chunk {cid!r} declares {size} bytes but only {len(data) - pos} remain"
            )
        body = data[pos : pos + size]
        pos += size + (size & 1)  # chunks are word aligned
        if cid == b"fmt ":
            if size < 16:
                raise WavFormatError(f"{path}: fmt chunk too short ({size} bytes)")
            fmt = struct.unpack_from("<HHIIHH", body)
        elif cid == b"data":
            payload = body

    if fmt is None:
        raise WavFormatError(f"{path}: missing fmt chunk")
    if payload is None:
        raise WavFormatError(f"{path}: missing data chunk")

    audio_format, channels, rate, _byte_rate, _block_align, bits = fmt
    if channels != 1:
        raise WavChannelError(f"{path}: expected mono, got {channels} channels")
    if rate != DEFAULT_SAMPLE_RATE:
        raise WavSampleRateError(f"{path}: expected {DEFAULT_SAMPLE_RATE} Hz, got {rate}")

    if audio_format == 1 and bits == 16:
        if len(payload) % 2:
            raise WavTruncatedError(f"{path}: PCM16 data length {len(payload)} is odd")
        samples = np.frombuffer(payload, dtype="<i2").astype(np.float64) / 32768.0
    elif audio_format == 3 and bits == 32:
        if len(payload) % 4:
            raise WavTruncatedError(f"{path}: float32 data length {len(payload)} not a multiple of 4")
        samples = np.frombuffer(payload, dtype="<f4").astype(np.float64)
    else:
        raise WavEncodingError(
            f"{path}: unsupported encoding (format tag {audio_format}, {bits}-bit); "
            "only 16-bit PCM and 32-bit float are accepted"
        )
    return AudioClip(samples, rate)


def save_wav(clip: AudioClip, path) -> None:
    """Write 16-bit PCM, rounding half away from zero and clamping to int16."""
    v = clip.samples * 32768.0
    q = np.where(v >= 0, np.floor(v + 0.5), np.ceil(v - 0.5))
    q = np.clip(q, -32768, 32767).astype("<i2")
    body = q.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(body), b"WAVE",
        b"fmt ", 16, 1, 1, clip.sample_rate, clip.sample_rate * 2, 2, 16,
        b"data", len(body),
    )
    Path(path).write_bytes(header + body)


def translate(samples: np.ndarray, offset: int) -> np.ndarray:
    """Shift a sequence by ``offset`` positions (positive = later), zero fill."""
    out = np.zeros_like(samples)
    n = samples.shape[0]
    if abs(offset) >= n:
        return out
    if offset >= 0:
        out[offset:] = samples[: n - offset]
    else:
        out[: n + offset] = samples[-offset:]
    return out


def _window_energies(samples: np.ndarray, params: CenterParams):
    """Per-window Gaussian-weighted mean energy and the window spans."""
    n = samples.shape[0]
    energies = []
    spans = []
    for a in range(0, n, params.w):
        b = min(a + params.w, n)
        t = np.arange(a, b, dtype=np.float64)
        c = (a + b - 1) / 2.0
        g = np.exp(-((t - c) ** 2) / (2.0 * params.sigma**2))
        seg = samples[a:b]
        energies.append(float(np.sum(g * seg * seg) / np.sum(g)))
        spans.append((a, b))
    return np.array(energies), spans


def center(clip: AudioClip, params: CenterParams | None = None) -> AudioClip:
    """Translate the clip so its active span is centered in the frame.

    Windows of ``w`` samples get a Gaussian-weighted mean energy; the span
    runs from the first to the last window at or above the threshold, and
    the whole signal is translated so the span midpoint lands at L/2. A
    clip with no window above threshold is returned unchanged.
    """
    if params is None:
        params = CenterParams()
    n = clip.length
    if params.w > n:
        raise ValueError(f"window size {params.w} exceeds clip length {n}")
    energies, spans = _window_energies(clip.samples, params)
    active = np.flatnonzero(energies >= params.th)
    if active.size == 0:
        return clip
    span_start = spans[active[0]][0]
    span_end = spans[active[-1]][1]
    offset = round(n / 2 - (span_start + span_end) / 2)
    if offset == 0:
        return clip
    return AudioClip(translate(clip.samples, offset), clip.sample_rate)


def random_shift(clip: AudioClip, params: ShiftParams) -> AudioClip:
    """Translate by an integer drawn uniformly from [-max_shift, +max_shift].

    Deterministic for a fixed ``rng_seed``. Meant to run on centered clips
    so a span shorter than half the frame cannot be pushed off the edge.
    """
    if params.max_shift > clip.length // 2:
        raise ValueError(
            f"max_shift {params.max_shift} exceeds half the clip length {clip.length}"
        )
    if params.max_shift == 0:
        return clip
    rng = np.random.default_rng(params.rng_seed)
    offset = int(rng.integers(-params.max_shift, params.max_shift + 1))
    return AudioClip(translate(clip.samples, offset), clip.sample_rate)
