"""Clip loading, quantization, centering, and random shifting."""

import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfcaudio.signal import (
    AudioClip,
    CenterParams,
    ShiftParams,
    WavChannelError,
    WavEncodingError,
    WavError,
    WavFormatError,
    WavSampleRateError,
    WavTruncatedError,
    center,
    load_wav,
    random_shift,
    save_wav,
    translate,
)


def energy_midpoint(samples):
    e = samples * samples
    total = e.sum()
    return float((np.arange(len(samples)) * e).sum() / total) if total else None


# --- wav loading ---------------------------------------------------------------

def test_pcm16_scaling(wav_factory):
    payload = struct.pack("<3h", -32768, 16384, 0)
    clip = load_wav(wav_factory(payload=payload))
    assert clip.samples.tolist() == [-1.0, 0.5, 0.0]
    assert clip.sample_rate == 16000


def test_silence_second(wav_factory):
    clip = load_wav(wav_factory(payload=b"\x00" * 32000))
    assert clip.length == 16000
    assert not clip.samples.any()


def test_short_clip_accepted(wav_factory):
    clip = load_wav(wav_factory(payload=b"\x00" * (15872 * 2)))
    assert clip.length == 15872


def test_float32_passthrough(wav_factory):
    values = np.array([0.25, -0.75, 1.5], dtype="<f4")  # no clamping on float data
    clip = load_wav(wav_factory(audio_format=3, bits=32, payload=values.tobytes()))
    assert clip.samples.tolist() == values.astype(np.float64).tolist()


def test_wrong_rate_rejected(wav_factory):
    with pytest.raises(WavSampleRateError, match="8000"):
        load_wav(wav_factory(rate=8000, payload=b"\x00\x00"))


def test_stereo_rejected(wav_factory):
    with pytest.raises(WavChannelError, match="2 channels"):
        load_wav(wav_factory(channels=2, payload=b"\x00" * 4))


@pytest.mark.parametrize("kwargs", [
    dict(audio_format=6, bits=8),    # a-law
    dict(audio_format=1, bits=8),    # PCM8
    dict(audio_format=3, bits=64),   # double float
])
def test_unsupported_encoding_rejected(wav_factory, kwargs):
    with pytest.raises(WavEncodingError):
        load_wav(wav_factory(payload=b"\x00" * 8, **kwargs))


def test_truncated_data_rejected(wav_factory):
    # data chunk declares more bytes than the file holds
    with pytest.raises(WavTruncatedError, match="declares"):
        load_wav(wav_factory(payload=b"\x00\x00", data_size=4096))


def test_odd_pcm_payload_rejected(wav_factory):
    with pytest.raises(WavTruncatedError, match="odd"):
        load_wav(wav_factory(payload=b"\x00" * 3))


def test_non_riff_rejected(wav_factory, tmp_path):
    with pytest.raises(WavFormatError, match="RIFF"):
        load_wav(wav_factory(magic=b"FORM"))
    junk = tmp_path / "junk.wav"
    junk.write_bytes(b"\x01\x02")
    with pytest.raises(WavFormatError):
        load_wav(junk)


def test_missing_chunks_rejected(wav_factory):
    with pytest.raises(WavFormatError, match="fmt"):
        load_wav(wav_factory(drop_fmt=True, payload=b"\x00\x00"))
    with pytest.raises(WavFormatError, match="data"):
        load_wav(wav_factory(drop_data=True))


def test_error_hierarchy():
    for exc in (WavFormatError, WavTruncatedError, WavSampleRateError,
                WavChannelError, WavEncodingError):
        assert issubclass(exc, WavError)
        assert issubclass(exc, ValueError)


# --- wav saving ----------------------------------------------------------------

def test_save_rounds_half_away_from_zero(tmp_path):
    clip = AudioClip(np.array([0.0, 1.0, -1.0, 100.5 / 32768.0, -100.5 / 32768.0]))
    path = tmp_path / "q.wav"
    save_wav(clip, path)
    raw = np.frombuffer(path.read_bytes()[-10:], dtype="<i2")
    assert raw.tolist() == [0, 32767, -32768, 101, -101]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_roundtrip_quantization_bound(seed):
    rng = np.random.default_rng(seed)
    samples = rng.uniform(-1.0, 1.0, size=200)
    clip = AudioClip(samples)
    import tempfile, os
    fd, path = tempfile.mkstemp(suffix=".wav")
    os.close(fd)
    try:
        save_wav(clip, path)
        back = load_wav(path)
    finally:
        os.unlink(path)
    assert np.max(np.abs(back.samples - samples)) <= 1.0 / 32768.0


def test_exact_roundtrip_on_pcm_grid(tmp_path, pcm16_grid_rng):
    samples = pcm16_grid_rng(np.random.default_rng(3), 500)
    path = tmp_path / "g.wav"
    save_wav(AudioClip(samples), path)
    assert np.array_equal(load_wav(path).samples, samples)


# --- clip type ------------------------------------------------------------------

def test_clip_validation():
    with pytest.raises(ValueError, match="1-D"):
        AudioClip(np.zeros((2, 2)))
    with pytest.raises(ValueError, match="rate"):
        AudioClip(np.zeros(4), sample_rate=0)


def test_clip_samples_immutable():
    clip = AudioClip(np.zeros(4))
    with pytest.raises(ValueError):
        clip.samples[0] = 1.0


# --- translation -----------------------------------------------------------------

def test_translate_moves_and_zero_fills():
    s = np.zeros(10)
    s[4] = 1.0
    assert translate(s, 3)[7] == 1.0
    assert translate(s, -4)[0] == 1.0
    assert translate(s, 3).sum() == 1.0
    assert not translate(s, 7).any()       # pushed off the end
    assert not translate(s, 100).any()     # shift beyond length


# --- centering -------------------------------------------------------------------

def test_center_impulse_burst():
    s = np.zeros(16000)
    s[:2000] = 1.0
    out = center(AudioClip(s))
    mid = energy_midpoint(out.samples)
    assert abs(mid - 8000) <= 100
    # the burst moved as a block: 2000 ones now sitting around the middle
    nz = np.flatnonzero(out.samples)
    assert nz.size == 2000 and nz[0] == 7000 and nz[-1] == 8999
    assert out.length == 16000


def test_center_all_zero_is_fixed_point():
    clip = AudioClip(np.zeros(16000))
    assert np.array_equal(center(clip).samples, clip.samples)


def test_center_centered_input_is_fixed_point():
    s = np.zeros(16000)
    s[7000:9000] = 0.5
    clip = AudioClip(s)
    assert np.array_equal(center(clip).samples, clip.samples)


def test_center_quiet_clip_below_threshold_unchanged():
    s = np.full(16000, 1e-4)  # energy 1e-8, far below the 1e-4 threshold
    clip = AudioClip(s)
    assert np.array_equal(center(clip).samples, clip.samples)


def test_center_idempotent_within_window():
    rng = np.random.default_rng(9)
    for _ in range(5):
        s = np.zeros(16000)
        a = int(rng.integers(0, 12000))
        s[a : a + 3000] = rng.uniform(-1, 1, 3000)
        once = center(AudioClip(s))
        twice = center(once)
        assert abs(energy_midpoint(twice.samples) - energy_midpoint(once.samples)) < 100


def test_center_never_increases_energy():
    rng = np.random.default_rng(10)
    for _ in range(5):
        s = np.zeros(4000)
        a = int(rng.integers(0, 3500))
        s[a : a + 400] = rng.uniform(-1, 1, 400)
        clip = AudioClip(s)
        assert (center(clip).samples ** 2).sum() <= (s**2).sum() + 1e-12


def test_center_partial_last_window():
    # 350 samples with w=100 leaves a 50-sample final window; must not crash
    s = np.zeros(350)
    s[300:] = 1.0
    out = center(AudioClip(s), CenterParams())
    assert out.length == 350 and out.samples.any()


def test_center_window_longer_than_clip_rejected():
    with pytest.raises(ValueError, match="window"):
        center(AudioClip(np.zeros(50)), CenterParams(w=100))


def test_center_params_validation():
    for kwargs in (dict(w=0), dict(sigma=0), dict(th=-1e-9)):
        with pytest.raises(ValueError):
            CenterParams(**kwargs)


# --- random shifting ----------------------------------------------------------------

def test_random_shift_deterministic():
    clip = AudioClip(np.sin(np.linspace(0, 20, 4000)))
    p = ShiftParams(max_shift=1000, rng_seed=77)
    assert np.array_equal(random_shift(clip, p).samples, random_shift(clip, p).samples)


def test_random_shift_zero_is_identity():
    clip = AudioClip(np.arange(10.0))
    assert np.array_equal(random_shift(clip, ShiftParams(0, 1)).samples, clip.samples)


def test_random_shift_moves_impulse_within_bound():
    s = np.zeros(8000)
    s[4000] = 1.0
    seen = set()
    for seed in range(40):
        out = random_shift(AudioClip(s), ShiftParams(max_shift=500, rng_seed=seed))
        pos = int(np.flatnonzero(out.samples)[0])
        assert abs(pos - 4000) <= 500
        seen.add(pos)
    assert len(seen) > 10  # different seeds produce different draws


def test_random_shift_validation():
    with pytest.raises(ValueError):
        ShiftParams(max_shift=-1)
    with pytest.raises(ValueError, match="half"):
        random_shift(AudioClip(np.zeros(10)), ShiftParams(max_shift=6))
