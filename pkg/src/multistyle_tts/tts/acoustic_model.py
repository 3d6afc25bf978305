"""Frame-level acoustic model: linguistic + prosodic features to 13-dim MFCC.

Two unidirectional recurrent layers over frame-rate inputs. Each frame's
input is the phoneme's linguistic features, fractional position inside the
phoneme, normalized F0 and voicing, plus the style and speaker embeddings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import Tensor, nn

from ..corpus.labels import NUM_STYLES
from ..stylemodel.embedding import StyleEmbedding
from .frontend import LINGUISTIC_DIM, LinguisticSequence
from .prosody_model import F0_SCALE, ProsodyTrack

ACOUSTIC_DIM = 13


@dataclass(frozen=True)
class AcousticConfig:
    ling_dim: int = LINGUISTIC_DIM
    style_dim: int = NUM_STYLES
    speaker_dim: int = 8
    num_speakers: int = 4
    hidden: int = 256
    layers: int = 2
    out_dim: int = ACOUSTIC_DIM
    seed: int = 0


@dataclass(frozen=True)
class AcousticFrames:
    mfcc: np.ndarray  # T x 13

    def __post_init__(self):
        mfcc = np.asarray(self.mfcc, dtype=np.float64)
        if mfcc.ndim != 2 or mfcc.shape[1] != ACOUSTIC_DIM:
            raise ValueError(f"acoustic frames must be T x {ACOUSTIC_DIM}, got {mfcc.shape}")
        if not np.isfinite(mfcc).all():
            raise ValueError("non-finite acoustic frames")
        object.__setattr__(self, "mfcc", mfcc)

    def __len__(self) -> int:
        return len(self.mfcc)


def upsample_linguistic(ling: LinguisticSequence, track: ProsodyTrack) -> np.ndarray:
    """Frame-rate inputs: repeated phoneme features + in-phoneme position +
    normalized F0 + voiced flag. Length equals the track's total frames."""
    durations = track.durations
    repeated = np.repeat(ling.features, durations, axis=0)
    frac = np.concatenate(
        [np.arange(d) / (d - 1) if d > 1 else np.zeros(1) for d in durations]
    )
    f0 = track.f0
    return np.concatenate(
        [repeated, frac[:, None], (f0 / F0_SCALE)[:, None], (f0 > 0).astype(np.float64)[:, None]],
        axis=1,
    )


class AcousticModel(nn.Module):
    def __init__(self, config: AcousticConfig):
        super().__init__()
        self.config = config
        self.trained = False
        self.speaker_emb = nn.Embedding(config.num_speakers, config.speaker_dim)
        frame_dim = config.ling_dim + 3 + config.style_dim + config.speaker_dim
        self.rnn = nn.LSTM(frame_dim, config.hidden, num_layers=config.layers, batch_first=True)
        self.out = nn.Linear(config.hidden, config.out_dim)

    def forward(self, frames: Tensor, style: Tensor, speaker: Tensor) -> Tensor:
        """frames: [B, T, ling_dim + 3]; style: [B, style_dim]; speaker: [B] long."""
        b, t, _ = frames.shape
        spk = self.speaker_emb(speaker)
        cond = torch.cat([style, spk], dim=1).unsqueeze(1).expand(b, t, -1)
        x = torch.cat([frames, cond], dim=2)
        h, _ = self.rnn(x)
        return self.out(h)


def build_acoustic_model(config: AcousticConfig) -> AcousticModel:
    torch.manual_seed(config.seed)
    return AcousticModel(config)


@torch.no_grad()
def predict_acoustic(
    model: AcousticModel,
    ling: LinguisticSequence,
    track: ProsodyTrack,
    style: StyleEmbedding,
    speaker: int = 0,
    strict: bool = True,
) -> AcousticFrames:
    """T x 13 spectral frames, T = the track's total frame count."""
    if strict and not model.trained:
        raise RuntimeError("acoustic model is untrained (pass strict=False to override)")
    if len(ling) != len(track.durations):
        raise ValueError(f"{len(ling)} phonemes vs {len(track.durations)} durations")
    frames = upsample_linguistic(ling, track)
    if len(frames) != track.total_frames:
        raise ValueError("frame-level inputs misaligned with durations")
    was_training = model.training
    model.eval()
    try:
        frames_t = torch.from_numpy(frames).float().unsqueeze(0)
        style_t = torch.from_numpy(style.p).float().unsqueeze(0)
        spk_t = torch.tensor([speaker], dtype=torch.long)
        out = model(frames_t, style_t, spk_t)[0].numpy()
    finally:
        model.train(was_training)
    return AcousticFrames(mfcc=out.astype(np.float64))
