"""Frame-level MFCC and utterance-level prosody feature extraction.

MFCC: 13 cepstra (including C0) from 40 mel filters over 25 ms windows at a
10 ms hop, with delta and delta-delta appended (39 columns total).

Prosody: a fixed 35-statistic vector. Order and meaning:

    0-7   F0 over voiced frames: mean, std, min, max, range, median,
          slope (Hz/s), interquartile range
    8-14  log frame energy: mean, std, min, max, range, slope (1/s), median
    15    voiced-frame ratio
    16    speaking rate (voiced frames per second)
    17-18 zero-crossing rate: mean, std
    19-20 abs frame-energy delta: mean, std
    21-22 abs voiced-F0 delta: mean, std
    23-24 spectral centroid (Hz): mean, std
    25-26 spectral rolloff (85%, Hz): mean, std
    27-29 RMS loudness: mean, std, max
    30    pause ratio (fraction of frames inside pauses)
    31    pause count
    32    utterance duration (s)
    33-34 harmonics-to-noise proxy (autocorrelation periodicity): mean, std

Unvoiced-only audio yields zeros for every F0 statistic and voiced ratio 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.fft import dct

from ..audio import Waveform, resample
from ..f0 import analyze_f0

MFCC_DIM = 39
PROSODY_DIM = 35
EMBEDDING_DIM = 300

_LOG_FLOOR = 1e-10
# Frames more than 40 dB below the loudest frame count as silence for
# pause detection; a pause is at least 5 consecutive silent frames (50 ms).
_PAUSE_DB = 40.0
_PAUSE_MIN_FRAMES = 5


@dataclass(frozen=True)
class FeatureConfig:
    sample_rate: int = 16000
    window_s: float = 0.025
    hop_s: float = 0.010
    n_mels: int = 40
    n_ceps: int = 13
    delta_width: int = 2


@dataclass
class FeatureBundle:
    """All classifier inputs for one utterance."""

    mfcc: np.ndarray              # T x 39
    prosody: np.ndarray           # 35
    tokens: list[str] = field(default_factory=list)
    token_embeddings: np.ndarray = None  # L x 300

    def validate(self) -> None:
        if self.mfcc.ndim != 2 or self.mfcc.shape[1] != MFCC_DIM:
            raise ValueError(f"mfcc must be T x {MFCC_DIM}, got {self.mfcc.shape}")
        if self.prosody.shape != (PROSODY_DIM,):
            raise ValueError(f"prosody must have length {PROSODY_DIM}, got {self.prosody.shape}")
        if self.token_embeddings is not None:
            if self.token_embeddings.ndim != 2 or self.token_embeddings.shape[1] != EMBEDDING_DIM:
                raise ValueError(f"token embeddings must be L x {EMBEDDING_DIM}")
            if self.token_embeddings.shape[0] != len(self.tokens):
                raise ValueError("one embedding row per token required")
        for name, arr in (("mfcc", self.mfcc), ("prosody", self.prosody)):
            if not np.isfinite(arr).all():
                raise ValueError(f"non-finite entries in {name}")


def _frame(samples: np.ndarray, win: int, hop: int) -> np.ndarray:
    if len(samples) < win:
        raise ValueError(f"audio too short: {len(samples)} samples < one {win}-sample window")
    n = (len(samples) - win) // hop + 1
    idx = np.arange(win)[None, :] + hop * np.arange(n)[:, None]
    return samples[idx]


def _mel_filterbank(n_mels: int, nfft: int, rate: int) -> np.ndarray:
    def hz_to_mel(f):
        return 2595.0 * np.log10(1.0 + f / 700.0)

    def mel_to_hz(m):
        return 700.0 * (10.0 ** (m / 2595.0) - 1.0)

    n_bins = nfft // 2 + 1
    mels = np.linspace(0.0, hz_to_mel(rate / 2.0), n_mels + 2)
    freqs = mel_to_hz(mels)
    bins = np.floor((nfft + 1) * freqs / rate).astype(int)
    fb = np.zeros((n_mels, n_bins))
    for m in range(n_mels):
        lo, center, hi = bins[m], bins[m + 1], bins[m + 2]
        center = max(center, lo + 1)
        hi = max(hi, center + 1)
        fb[m, lo:center] = (np.arange(lo, center) - lo) / (center - lo)
        fb[m, center : hi + 1] = (hi - np.arange(center, hi + 1)) / (hi - center)
    return fb


def _deltas(x: np.ndarray, width: int) -> np.ndarray:
    """Regression deltas over +/- width frames, edges replicated."""
    denom = 2.0 * sum(n * n for n in range(1, width + 1))
    padded = np.concatenate([np.repeat(x[:1], width, axis=0), x, np.repeat(x[-1:], width, axis=0)], axis=0)
    out = np.zeros_like(x)
    for n in range(1, width + 1):
        out += n * (padded[width + n : width + n + len(x)] - padded[width - n : width - n + len(x)])
    return out / denom


def extract_mfcc(wav: Waveform, config: FeatureConfig = FeatureConfig()) -> np.ndarray:
    """T x 39 MFCC matrix (13 cepstra + deltas + delta-deltas).

    The mel log energies are floored, so digital silence produces finite
    cepstra with C0 pinned at the floor value.
    """
    if len(wav) == 0:
        raise ValueError("empty audio")
    wav = resample(wav, config.sample_rate)
    rate = config.sample_rate
    win = int(round(config.window_s * rate))
    hop = int(round(config.hop_s * rate))
    frames = _frame(wav.samples, win, hop)
    frames = frames * np.hamming(win)

    nfft = 1 << int(np.ceil(np.log2(win)))
    power = np.abs(np.fft.rfft(frames, n=nfft, axis=1)) ** 2 / nfft
    fb = _mel_filterbank(config.n_mels, nfft, rate)
    mel = np.log(np.maximum(power @ fb.T, _LOG_FLOOR))
    ceps = dct(mel, type=2, norm="ortho", axis=1)[:, : config.n_ceps]

    d1 = _deltas(ceps, config.delta_width)
    d2 = _deltas(d1, config.delta_width)
    return np.concatenate([ceps, d1, d2], axis=1)


def silence_c0(config: FeatureConfig = FeatureConfig()) -> float:
    """The C0 value digital silence maps to (the log floor through the DCT)."""
    return float(np.log(_LOG_FLOOR) * config.n_mels / np.sqrt(config.n_mels))


def extract_prosody(wav: Waveform, config: FeatureConfig = FeatureConfig()) -> np.ndarray:
    """The fixed 35-dim utterance-level prosody vector (see module docstring)."""
    if len(wav) == 0:
        raise ValueError("empty audio")
    wav = resample(wav, config.sample_rate)
    rate = config.sample_rate
    win = int(round(config.window_s * rate))
    hop = int(round(config.hop_s * rate))
    frames = _frame(wav.samples, win, hop)
    n_frames = len(frames)
    times = np.arange(n_frames) * config.hop_s

    energy = (frames**2).sum(axis=1)
    log_energy = np.log(energy + _LOG_FLOOR)
    rms = np.sqrt(energy / win)
    signs = np.signbit(frames).astype(np.int8)
    zcr = np.abs(np.diff(signs, axis=1)).sum(axis=1) / (win - 1)

    windowed = frames * np.hamming(win)
    nfft = 1 << int(np.ceil(np.log2(win)))
    mag = np.abs(np.fft.rfft(windowed, n=nfft, axis=1))
    freqs = np.fft.rfftfreq(nfft, d=1.0 / rate)
    magsum = mag.sum(axis=1)
    centroid = np.where(magsum > 0, (mag * freqs).sum(axis=1) / np.maximum(magsum, 1e-20), 0.0)
    cum = np.cumsum(mag**2, axis=1)
    total = cum[:, -1]
    roll_idx = (cum >= 0.85 * np.maximum(total[:, None], 1e-20)).argmax(axis=1)
    rolloff = np.where(total > 0, freqs[roll_idx], 0.0)

    if len(wav) >= int(round(0.040 * rate)):
        f0an = analyze_f0(wav)
        fr, voiced, periodicity = f0an.f0, f0an.voiced, f0an.periodicity
    else:
        # Too short for the F0 window: treat as fully unvoiced.
        fr = np.zeros(0)
        voiced = np.zeros(0, dtype=bool)
        periodicity = np.zeros(0)
    vf0 = fr[fr > 0]
    n_f0_frames = len(fr)

    def slope(y: np.ndarray, t: np.ndarray) -> float:
        if len(y) < 2 or np.ptp(t) == 0:
            return 0.0
        return float(np.polyfit(t, y, 1)[0])

    if vf0.size:
        tv = np.arange(n_f0_frames)[fr > 0] * 0.010
        f0_stats = [
            vf0.mean(),
            vf0.std(),
            vf0.min(),
            vf0.max(),
            np.ptp(vf0),
            np.median(vf0),
            slope(vf0, tv),
            np.percentile(vf0, 75) - np.percentile(vf0, 25),
        ]
        df0 = np.abs(np.diff(vf0)) if vf0.size > 1 else np.zeros(1)
        df0_stats = [df0.mean(), df0.std()]
    else:
        f0_stats = [0.0] * 8
        df0_stats = [0.0, 0.0]

    voiced_ratio = float(voiced.mean()) if n_f0_frames else 0.0
    duration = len(wav) / rate
    speaking_rate = float(voiced.sum()) / duration if duration > 0 else 0.0

    silent = log_energy < (log_energy.max() - _PAUSE_DB / 10.0 * np.log(10.0))
    pause_frames = 0
    pause_count = 0
    run = 0
    for s in np.append(silent, False):
        if s:
            run += 1
        else:
            if run >= _PAUSE_MIN_FRAMES:
                pause_frames += run
                pause_count += 1
            run = 0

    denergy = np.abs(np.diff(energy)) if n_frames > 1 else np.zeros(1)
    hnr = periodicity[voiced] if voiced.any() else np.zeros(1)

    vec = np.array(
        f0_stats
        + [
            log_energy.mean(),
            log_energy.std(),
            log_energy.min(),
            log_energy.max(),
            np.ptp(log_energy),
            slope(log_energy, times),
            np.median(log_energy),
            voiced_ratio,
            speaking_rate,
            zcr.mean(),
            zcr.std(),
            denergy.mean(),
            denergy.std(),
        ]
        + df0_stats
        + [
            centroid.mean(),
            centroid.std(),
            rolloff.mean(),
            rolloff.std(),
            rms.mean(),
            rms.std(),
            rms.max(),
            pause_frames / n_frames,
            float(pause_count),
            duration,
            hnr.mean(),
            hnr.std(),
        ],
        dtype=np.float64,
    )
    assert vec.shape == (PROSODY_DIM,)
    return vec
