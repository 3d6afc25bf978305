import numpy as np
import pytest

from multistyle_tts.audio import Waveform
from multistyle_tts.corpus.features import (
    MFCC_DIM,
    PROSODY_DIM,
    FeatureBundle,
    FeatureConfig,
    extract_mfcc,
    extract_prosody,
    silence_c0,
)


def tone(freq=220.0, seconds=1.0, rate=16000, amp=0.5):
    t = np.arange(int(seconds * rate)) / rate
    return Waveform(amp * np.sin(2 * np.pi * freq * t), rate)


def test_frame_count_for_one_second():
    # floor((16000 - 400) / 160) + 1 = 98 under 25 ms / 10 ms framing
    m = extract_mfcc(tone(seconds=1.0))
    assert 96 <= len(m) <= 101
    assert len(m) == 98


def test_mfcc_width_is_39():
    for seconds in (0.12, 0.5, 2.0):
        m = extract_mfcc(tone(seconds=seconds))
        assert m.shape[1] == MFCC_DIM
        assert np.isfinite(m).all()


def test_digital_silence_hits_log_floor():
    m = extract_mfcc(Waveform(np.zeros(16000), 16000))
    assert np.isfinite(m).all()
    assert np.allclose(m[:, 0], silence_c0(), atol=1e-9)
    # deltas of a constant sequence vanish
    assert np.allclose(m[:, 13:], 0.0)


def test_empty_audio_rejected():
    with pytest.raises(ValueError):
        extract_mfcc(Waveform(np.zeros(0), 16000))
    with pytest.raises(ValueError):
        extract_prosody(Waveform(np.zeros(0), 16000))


def test_too_short_audio_rejected():
    with pytest.raises(ValueError, match="too short"):
        extract_mfcc(Waveform(np.zeros(100), 16000))


def test_prosody_tone_oracle():
    """220 Hz pure tone: F0 mean within 2 Hz, tight F0 spread, fully voiced."""
    p = extract_prosody(tone(220.0))
    assert p.shape == (PROSODY_DIM,)
    assert abs(p[0] - 220.0) < 2.0   # f0 mean
    assert p[1] < 2.0                # f0 std
    assert p[15] > 0.95              # voiced ratio


def test_prosody_white_noise_unvoiced():
    rng = np.random.default_rng(0)
    p = extract_prosody(Waveform(0.3 * rng.standard_normal(16000), 16000))
    assert p[15] < 0.05              # voiced ratio
    assert np.allclose(p[:8], 0.0)   # all F0 statistics zero


def test_prosody_shape_and_finiteness():
    rng = np.random.default_rng(1)
    for wav in (tone(150.0, 0.4), Waveform(rng.standard_normal(8000) * 0.2, 16000), tone(330.0, 1.3, 22050)):
        p = extract_prosody(wav)
        assert p.shape == (PROSODY_DIM,)
        assert np.isfinite(p).all()


def test_prosody_handles_sub_f0_window_audio():
    # longer than one MFCC window (25 ms) but shorter than the F0 window (40 ms)
    p = extract_prosody(tone(220.0, seconds=0.03))
    assert p.shape == (PROSODY_DIM,)
    assert p[15] == 0.0


def test_bundle_validation():
    good = FeatureBundle(
        mfcc=np.zeros((5, MFCC_DIM)),
        prosody=np.zeros(PROSODY_DIM),
        tokens=["a", "b"],
        token_embeddings=np.zeros((2, 300)),
    )
    good.validate()
    with pytest.raises(ValueError, match="39"):
        FeatureBundle(np.zeros((5, 38)), np.zeros(PROSODY_DIM)).validate()
    with pytest.raises(ValueError, match="35"):
        FeatureBundle(np.zeros((5, MFCC_DIM)), np.zeros(34)).validate()
    bad = FeatureBundle(np.full((2, MFCC_DIM), np.nan), np.zeros(PROSODY_DIM))
    with pytest.raises(ValueError, match="non-finite"):
        bad.validate()
