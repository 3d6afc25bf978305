"""Deterministic source-filter vocoder.

Excitation is a pulse train at the frame F0 (white noise on unvoiced
frames). Each 10 ms hop is filtered by the spectral envelope recovered from
the 13 cepstra (inverse cosine transform to the 40-band mel log spectrum,
interpolated to linear frequency), then overlap-added with a Hann window at
50% overlap.
"""

from __future__ import annotations

import numpy as np
from scipy.fft import idct

from ..audio import Waveform
from .acoustic_model import AcousticFrames

N_MELS = 40
HOP_S = 0.010


def _mel_envelope(ceps: np.ndarray, nfft: int, rate: int) -> np.ndarray:
    """Per-frame linear-frequency magnitude response from truncated cepstra."""
    t, n_ceps = ceps.shape
    padded = np.zeros((t, N_MELS))
    padded[:, :n_ceps] = ceps
    log_mel = idct(padded, type=2, norm="ortho", axis=1)

    def hz_to_mel(f):
        return 2595.0 * np.log10(1.0 + f / 700.0)

    def mel_to_hz(m):
        return 700.0 * (10.0 ** (m / 2595.0) - 1.0)

    centers = mel_to_hz(np.linspace(0.0, hz_to_mel(rate / 2.0), N_MELS + 2))[1:-1]
    bin_freqs = np.fft.rfftfreq(nfft, d=1.0 / rate)
    log_power = np.stack([np.interp(bin_freqs, centers, row) for row in log_mel])
    return np.exp(0.5 * log_power)


def vocode_dsp(
    frames: AcousticFrames,
    f0: np.ndarray,
    rate: int = 24000,
    seed: int = 0,
) -> Waveform:
    """Synthesize a waveform of frames * hop samples at `rate`.

    len(f0) must equal the frame count. Deterministic: unvoiced noise comes
    from a generator seeded with `seed`.
    """
    mfcc = frames.mfcc
    f0 = np.asarray(f0, dtype=np.float64)
    if len(f0) != len(mfcc):
        raise ValueError(f"f0 length {len(f0)} != frame count {len(mfcc)}")
    t_frames = len(mfcc)
    hop = int(round(HOP_S * rate))
    win = 2 * hop
    n_out = t_frames * hop

    rng = np.random.default_rng(seed)
    exc = np.zeros(n_out + win)
    phase = 0.0
    for t in range(t_frames):
        start = t * hop
        if f0[t] > 0:
            # Band-limited pulse train: all harmonics of f0 below 0.45*rate,
            # summed in closed form (Dirichlet kernel), phase-continuous
            # across frames. Unlike single-sample impulses this has an exact
            # period regardless of sample quantization.
            step = 2.0 * np.pi * f0[t] / rate
            k = max(1, min(int(0.45 * rate / f0[t]), 80))
            phi = phase + step * np.arange(1, hop + 1)
            denom = np.sin(phi / 2.0)
            num = np.sin((k + 0.5) * phi)
            with np.errstate(divide="ignore", invalid="ignore"):
                vals = (num / denom - 1.0) / 2.0
            exc[start : start + hop] = np.where(np.abs(denom) < 1e-9, float(k), vals)
            phase = float(np.mod(phi[-1], 2.0 * np.pi))
        else:
            exc[start : start + hop] = rng.standard_normal(hop) * 0.1
            phase = 0.0

    nfft = 1 << int(np.ceil(np.log2(win)))
    envelope = _mel_envelope(mfcc, nfft, rate)
    window = np.hanning(win + 1)[:-1]  # periodic Hann: exact COLA at 50% overlap
    out = np.zeros(n_out + win)
    for t in range(t_frames):
        seg = exc[t * hop : t * hop + win]
        rms = np.sqrt((seg**2).mean())
        if rms > 1e-12:
            seg = seg / rms * 0.05
        spec = np.fft.rfft(seg * window, n=nfft)
        shaped = np.fft.irfft(spec * envelope[t], n=nfft)[:win]
        out[t * hop : t * hop + win] += shaped

    out = out[:n_out]
    peak = np.abs(out).max()
    if peak > 0.95:
        out = out * (0.95 / peak)
    return Waveform(np.clip(out, -1.0, 1.0), rate)
