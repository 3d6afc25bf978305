import numpy as np
import pytest

from multistyle_tts.audio import Waveform
from multistyle_tts.f0 import analyze_f0, estimate_f0, frame_count


def tone(freq, seconds=1.0, rate=24000, amp=0.5):
    t = np.arange(int(seconds * rate)) / rate
    return Waveform(amp * np.sin(2 * np.pi * freq * t), rate)


def test_tone_accuracy():
    f0 = estimate_f0(tone(220.0))
    voiced = f0[f0 > 0]
    assert abs(np.median(voiced) - 220.0) < 2.0
    assert abs(voiced.mean() - 220.0) < 2.0


def test_white_noise_mostly_unvoiced():
    rng = np.random.default_rng(0)
    f0 = estimate_f0(Waveform(0.4 * rng.standard_normal(24000), 24000))
    assert (f0 == 0).mean() >= 0.8


def test_amplitude_invariance():
    loud = tone(220.0)
    quiet = Waveform(loud.samples * 0.5, loud.rate)
    assert np.array_equal(estimate_f0(loud), estimate_f0(quiet))


def test_silence_unvoiced():
    f0 = estimate_f0(Waveform(np.zeros(24000), 24000))
    assert (f0 == 0).all()


def test_search_range_respected():
    for freq in (60.0, 100.0, 250.0, 480.0):
        f0 = estimate_f0(tone(freq))
        voiced = f0[f0 > 0]
        assert voiced.size
        assert abs(voiced.mean() - freq) / freq < 0.02


def test_empty_audio_rejected():
    with pytest.raises(ValueError):
        estimate_f0(Waveform(np.zeros(0), 24000))


def test_frame_count_helper():
    assert frame_count(24000, 24000) == (24000 - 960) // 240 + 1
    assert frame_count(100, 24000) == 0


def test_periodicity_high_for_tone_low_for_noise():
    an = analyze_f0(tone(180.0))
    assert an.periodicity[an.voiced].min() > 0.9
    rng = np.random.default_rng(1)
    noisy = analyze_f0(Waveform(0.4 * rng.standard_normal(24000), 24000))
    assert (~noisy.voiced).mean() >= 0.8
