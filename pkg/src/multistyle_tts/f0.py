"""Autocorrelation F0 tracking with a voicing decision.

Contours are sampled every 10 ms; 0 marks unvoiced frames. The search range
is 50-500 Hz, which needs a 40 ms analysis window (two periods at 50 Hz).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import butter, filtfilt

from .audio import Waveform

F0_MIN = 50.0
F0_MAX = 500.0
HOP_S = 0.010
WINDOW_S = 0.040

# Normalized-correlation peak above this counts as voiced.
VOICING_THRESHOLD = 0.55
# Frames quieter than this RMS are never voiced.
SILENCE_RMS = 1e-4


@dataclass(frozen=True)
class F0Analysis:
    f0: np.ndarray        # Hz per frame, 0 where unvoiced
    voiced: np.ndarray    # bool per frame
    periodicity: np.ndarray  # normalized autocorrelation peak per frame, in [0, 1]


def frame_count(n_samples: int, rate: int, window_s: float = WINDOW_S, hop_s: float = HOP_S) -> int:
    win = int(round(window_s * rate))
    hop = int(round(hop_s * rate))
    if n_samples < win:
        return 0
    return (n_samples - win) // hop + 1


def analyze_f0(wav: Waveform) -> F0Analysis:
    """Frame-wise F0, voicing and periodicity for a waveform.

    Uses the normalized cross-correlation of the first half of each 40 ms
    window against lagged copies, so the estimate is invariant to amplitude
    scaling. The peak lag is refined by parabolic interpolation, and among
    near-equal peaks the smallest lag wins to avoid sub-harmonic (octave-down)
    errors on strongly periodic signals.
    """
    if len(wav) == 0:
        raise ValueError("empty audio")
    rate = wav.rate
    win = int(round(WINDOW_S * rate))
    hop = int(round(HOP_S * rate))
    lag_min = int(np.floor(rate / F0_MAX))
    lag_max = int(np.ceil(rate / F0_MIN))
    if len(wav) < win:
        raise ValueError(f"audio too short for F0 analysis: {len(wav)} samples < {win}")

    # Low-pass before correlating: bright signals have correlation peaks
    # narrower than one sample at fractional lags, which integer-lag search
    # would miss entirely.
    cutoff = min(1500.0, 0.45 * rate)
    b, a = butter(4, cutoff / (rate / 2.0), btype="low")
    samples = filtfilt(b, a, wav.samples)

    n_frames = (len(wav) - win) // hop + 1
    idx = np.arange(win)[None, :] + hop * np.arange(n_frames)[:, None]
    frames = samples[idx]
    frames = frames - frames.mean(axis=1, keepdims=True)

    span = win - lag_max  # correlation support length
    nfft = 1 << int(np.ceil(np.log2(win + lag_max + 1)))
    head = np.zeros((n_frames, nfft))
    head[:, :span] = frames[:, :span]
    spec_head = np.fft.rfft(head, axis=1)
    spec_full = np.fft.rfft(frames, n=nfft, axis=1)
    # c[t, tau] = sum_k head[t, k] * frames[t, k + tau]
    corr = np.fft.irfft(np.conj(spec_head) * spec_full, axis=1)[:, : lag_max + 1]

    sq = np.concatenate([np.zeros((n_frames, 1)), np.cumsum(frames**2, axis=1)], axis=1)
    e_head = sq[:, span] - sq[:, 0]
    lags_all = np.arange(lag_max + 1)
    e_lag = sq[:, lags_all + span] - sq[:, lags_all]
    denom = np.sqrt(np.maximum(e_head[:, None] * e_lag, 1e-20))
    nccf = corr / denom

    search = nccf[:, lag_min : lag_max + 1]
    peak_val = search.max(axis=1)
    # A perfectly periodic frame peaks equally at every multiple of its
    # period, so restrict to local maxima near the global one and take the
    # shortest lag; that rejects sub-harmonic (octave-down) picks without
    # sliding off the true peak.
    padded = np.pad(nccf, ((0, 0), (0, 1)), constant_values=-np.inf)
    is_peak = (search >= padded[:, lag_min - 1 : lag_max]) & (search >= padded[:, lag_min + 1 : lag_max + 2])
    candidate = is_peak & (search >= 0.98 * peak_val[:, None])
    has_candidate = candidate.any(axis=1)
    best = np.where(has_candidate, candidate.argmax(axis=1), search.argmax(axis=1)) + lag_min

    # Parabolic refinement around the chosen peak.
    lag = best.astype(np.float64)
    interior = (best > lag_min) & (best < lag_max)
    if interior.any():
        t = np.nonzero(interior)[0]
        b = best[interior]
        y0 = nccf[t, b - 1]
        y1 = nccf[t, b]
        y2 = nccf[t, b + 1]
        denom2 = y0 - 2 * y1 + y2
        shift = np.where(np.abs(denom2) > 1e-12, 0.5 * (y0 - y2) / np.where(denom2 == 0, 1, denom2), 0.0)
        lag[interior] = b + np.clip(shift, -0.5, 0.5)

    rms = np.sqrt((frames**2).mean(axis=1))
    head_rms = np.sqrt(e_head / span)
    periodicity = np.clip(nccf[np.arange(n_frames), best], 0.0, 1.0)
    # Frames far quieter than the utterance peak are onset/offset edges or
    # silence, and a window whose correlation support (the head segment) is
    # near-silent yields spurious peaks; gate both out.
    loud = max(rms.max(), SILENCE_RMS)
    voiced = (
        (periodicity > VOICING_THRESHOLD)
        & (rms > SILENCE_RMS)
        & (rms > 0.05 * loud)
        & (head_rms > 0.05 * loud)
    )
    f0 = np.where(voiced, rate / lag, 0.0)
    f0 = np.where(voiced & (f0 >= F0_MIN) & (f0 <= F0_MAX), f0, np.where(voiced, np.clip(f0, F0_MIN, F0_MAX), 0.0))
    return F0Analysis(f0=f0, voiced=voiced, periodicity=np.where(voiced, periodicity, periodicity))


def estimate_f0(wav: Waveform) -> np.ndarray:
    """F0 contour in Hz per 10 ms frame; 0 marks unvoiced frames."""
    return analyze_f0(wav).f0


def voiced_mean(f0: np.ndarray) -> float:
    """Mean F0 over voiced frames, 0.0 if nothing is voiced."""
    v = f0[f0 > 0]
    return float(v.mean()) if v.size else 0.0
