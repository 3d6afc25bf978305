"""Autoregressive neural vocoder over 8-bit mu-law samples.

A single recurrent (GRU) layer predicts a categorical distribution over the
next mu-law code, conditioned on frame features (13 cepstra + F0 + voicing)
upsampled to sample rate. Desk-scale default is 128 hidden units; the
full-size 1024 variant is a config change.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import Tensor, nn

from ..audio import Waveform
from .acoustic_model import AcousticFrames
from .prosody_model import F0_SCALE

MU = 255.0
LEVELS = 256


def mu_law_encode(x: np.ndarray, mu: float = MU, levels: int = LEVELS) -> np.ndarray:
    """Float samples in [-1, 1] to integer codes in [0, levels-1]."""
    x = np.clip(np.asarray(x, dtype=np.float64), -1.0, 1.0)
    companded = np.sign(x) * np.log1p(mu * np.abs(x)) / np.log1p(mu)
    return np.round((companded + 1.0) / 2.0 * (levels - 1)).astype(np.int64)


def mu_law_decode(codes: np.ndarray, mu: float = MU, levels: int = LEVELS) -> np.ndarray:
    """Integer codes back to float samples (bin centers in the companded domain)."""
    companded = 2.0 * np.asarray(codes, dtype=np.float64) / (levels - 1) - 1.0
    return np.sign(companded) * (np.expm1(np.abs(companded) * np.log1p(mu))) / mu


@dataclass(frozen=True)
class NeuralVocoderConfig:
    hidden: int = 128
    embed_dim: int = 64
    cond_dim: int = 15  # 13 cepstra + normalized F0 + voiced flag
    hop: int = 240      # samples per frame (10 ms at 24 kHz)
    rate: int = 24000
    seed: int = 0

    def __post_init__(self):
        if self.hidden <= 0:
            raise ValueError(f"hidden size must be positive, got {self.hidden}")


class NeuralVocoder(nn.Module):
    def __init__(self, config: NeuralVocoderConfig):
        super().__init__()
        self.config = config
        self.trained = False
        self.sample_emb = nn.Embedding(LEVELS, config.embed_dim)
        self.rnn = nn.GRU(config.embed_dim + config.cond_dim, config.hidden, batch_first=True)
        self.head = nn.Linear(config.hidden, LEVELS)

    def forward(self, prev_codes: Tensor, cond: Tensor, state: Tensor | None = None) -> tuple[Tensor, Tensor]:
        """prev_codes: [B, T] long; cond: [B, T, cond_dim] -> logits [B, T, 256]."""
        x = torch.cat([self.sample_emb(prev_codes), cond], dim=2)
        h, state = self.rnn(x, state)
        return self.head(h), state


def build_neural_vocoder(config: NeuralVocoderConfig) -> NeuralVocoder:
    torch.manual_seed(config.seed)
    return NeuralVocoder(config)


def _conditioning(frames: AcousticFrames, f0: np.ndarray, hop: int) -> np.ndarray:
    if len(f0) != len(frames):
        raise ValueError(f"f0 length {len(f0)} != frame count {len(frames)}")
    per_frame = np.concatenate(
        [frames.mfcc, (f0 / F0_SCALE)[:, None], (f0 > 0).astype(np.float64)[:, None]], axis=1
    )
    return np.repeat(per_frame, hop, axis=0)


def train_neural_vocoder(
    pairs: list[tuple[AcousticFrames, np.ndarray, Waveform]],
    config: NeuralVocoderConfig = NeuralVocoderConfig(),
    epochs: int = 50,
    lr: float = 1e-3,
    seed: int = 0,
) -> tuple[NeuralVocoder, list[float]]:
    """Teacher-forced training on (frames, f0, waveform) triples.

    Returns the model and the per-epoch cross-entropy losses.
    """
    if not pairs:
        raise ValueError("no training pairs")
    model = build_neural_vocoder(config)
    torch.manual_seed(seed)
    optimizer = torch.optim.Adam(model.parameters(), lr=lr)

    prepared = []
    for frames, f0, wav in pairs:
        cond = _conditioning(frames, f0, config.hop)
        n = min(len(cond), len(wav.samples))
        codes = mu_law_encode(wav.samples[:n])
        prev = np.concatenate([[LEVELS // 2], codes[:-1]])
        prepared.append(
            (
                torch.from_numpy(prev).long().unsqueeze(0),
                torch.from_numpy(cond[:n]).float().unsqueeze(0),
                torch.from_numpy(codes).long().unsqueeze(0),
            )
        )

    losses = []
    for _ in range(epochs):
        model.train()
        total = 0.0
        for prev, cond, target in prepared:
            optimizer.zero_grad()
            logits, _ = model(prev, cond)
            loss = torch.nn.functional.cross_entropy(logits.transpose(1, 2), target)
            loss.backward()
            optimizer.step()
            total += loss.item()
        losses.append(total / len(prepared))
    model.trained = True
    model.eval()
    return model, losses


@torch.no_grad()
def vocode_neural(model: NeuralVocoder, frames: AcousticFrames, f0: np.ndarray) -> Waveform:
    """Autoregressive synthesis; greedy decoding keeps it deterministic."""
    config = model.config
    cond = torch.from_numpy(_conditioning(frames, f0, config.hop)).float()
    n = len(cond)
    was_training = model.training
    model.eval()
    try:
        codes = np.empty(n, dtype=np.int64)
        prev = torch.tensor([[LEVELS // 2]], dtype=torch.long)
        state = None
        for i in range(n):
            logits, state = model(prev, cond[i].view(1, 1, -1), state)
            nxt = int(logits[0, 0].argmax())
            codes[i] = nxt
            prev = torch.tensor([[nxt]], dtype=torch.long)
    finally:
        model.train(was_training)
    return Waveform(np.clip(mu_law_decode(codes), -1.0, 1.0), config.rate)
