"""Waveform container and 16-bit PCM WAV I/O."""

from __future__ import annotations

import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import resample_poly

DEFAULT_SYNTH_RATE = 24000


@dataclass(frozen=True)
class Waveform:
    """Mono audio as float samples in [-1, 1] plus a sample rate."""

    samples: np.ndarray
    rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"expected mono audio, got shape {samples.shape}")
        if self.rate <= 0:
            raise ValueError(f"invalid sample rate {self.rate}")
        object.__setattr__(self, "samples", np.clip(samples, -1.0, 1.0))

    @property
    def duration(self) -> float:
        return len(self.samples) / self.rate

    def __len__(self) -> int:
        return len(self.samples)


def resample(wav: Waveform, rate: int) -> Waveform:
    """Resample to `rate` with a polyphase filter; identity if rates match."""
    if rate == wav.rate:
        return wav
    from math import gcd

    g = gcd(rate, wav.rate)
    out = resample_poly(wav.samples, rate // g, wav.rate // g)
    return Waveform(np.clip(out, -1.0, 1.0), rate)


def write_wav(path: str | Path, wav: Waveform) -> None:
    """Write mono 16-bit PCM. Byte-deterministic for identical inputs."""
    pcm = np.round(np.clip(wav.samples, -1.0, 1.0) * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as f:
        f.setnchannels(1)
        f.setsampwidth(2)
        f.setframerate(wav.rate)
        f.writeframes(pcm.tobytes())


def read_wav(path: str | Path) -> Waveform:
    """Read a mono 16-bit PCM WAV file."""
    with wave.open(str(path), "rb") as f:
        if f.getnchannels() != 1:
            raise ValueError(f"{path}: expected mono audio, got {f.getnchannels()} channels")
        if f.getsampwidth() != 2:
            raise ValueError(f"{path}: expected 16-bit PCM, got {8 * f.getsampwidth()}-bit")
        rate = f.getframerate()
        raw = f.readframes(f.getnframes())
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32767.0
    return Waveform(samples, rate)


def wav_bytes(wav: Waveform) -> bytes:
    """Serialize to in-memory WAV bytes (for HTTP responses)."""
    import io

    pcm = np.round(np.clip(wav.samples, -1.0, 1.0) * 32767.0).astype("<i2")
    buf = io.BytesIO()
    with wave.open(buf, "wb") as f:
        f.setnchannels(1)
        f.setsampwidth(2)
        f.setframerate(wav.rate)
        f.writeframes(pcm.tobytes())
    return buf.getvalue()
