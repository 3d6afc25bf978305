import numpy as np
import pytest

from multistyle_tts.f0 import estimate_f0
from multistyle_tts.tts.acoustic_model import AcousticFrames
from multistyle_tts.tts.dsp_vocoder import vocode_dsp

FLAT = AcousticFrames(np.zeros((100, 13)))


def test_round_trip_110hz():
    wav = vocode_dsp(FLAT, np.full(100, 110.0))
    contour = estimate_f0(wav)
    voiced = contour[contour > 0]
    assert abs(voiced.mean() - 110.0) / 110.0 < 0.05
    assert abs(np.median(voiced) - 110.0) / 110.0 < 0.05


def test_output_length_contract():
    wav = vocode_dsp(FLAT, np.full(100, 110.0), rate=24000)
    assert abs(len(wav) - 24000) <= 240
    assert wav.rate == 24000


def test_all_unvoiced_is_noise_like():
    wav = vocode_dsp(FLAT, np.zeros(100))
    contour = estimate_f0(wav)
    assert (contour > 0).mean() < 0.2


def test_length_mismatch_rejected():
    with pytest.raises(ValueError, match="length"):
        vocode_dsp(FLAT, np.zeros(99))


def test_deterministic():
    a = vocode_dsp(FLAT, np.full(100, 140.0), seed=3)
    b = vocode_dsp(FLAT, np.full(100, 140.0), seed=3)
    assert np.array_equal(a.samples, b.samples)


def test_samples_clamped():
    rng = np.random.default_rng(0)
    loud = AcousticFrames(rng.standard_normal((60, 13)) * 3.0)
    wav = vocode_dsp(loud, np.full(60, 200.0))
    assert np.abs(wav.samples).max() <= 1.0


def test_spectral_envelope_shapes_output():
    """Cepstra with a strong negative C1 tilt concentrate energy at low
    frequencies relative to the flat envelope."""
    tilt = np.zeros((100, 13))
    tilt[:, 1] = -6.0
    flat_wav = vocode_dsp(FLAT, np.full(100, 120.0))
    tilt_wav = vocode_dsp(AcousticFrames(tilt), np.full(100, 120.0))

    def hf_ratio(w):
        spec = np.abs(np.fft.rfft(w.samples))
        freqs = np.fft.rfftfreq(len(w.samples), 1 / w.rate)
        return spec[freqs > 6000].sum() / spec.sum()

    assert hf_ratio(tilt_wav) < hf_ratio(flat_wav)
