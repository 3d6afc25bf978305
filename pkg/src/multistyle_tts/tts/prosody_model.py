"""Per-phoneme prosody prediction: durations and an F0 contour.

A single recurrent layer walks the phoneme sequence; at each step a
content-based global attention over the whole utterance's linguistic
features supplies a context vector. The style embedding and a speaker
embedding are concatenated to every input step. Each phoneme gets
(log duration, F0 start, F0 end, voiced logit); the frame-level contour is
built by linear interpolation inside each phoneme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import torch
from torch import Tensor, nn

from ..corpus.labels import NUM_STYLES
from ..stylemodel.embedding import StyleEmbedding
from .frontend import LINGUISTIC_DIM, LinguisticSequence

F0_FLOOR = 50.0
F0_CEIL = 500.0
F0_SCALE = 100.0  # network predicts F0 in units of 100 Hz
MAX_PHONEME_FRAMES = 200


@dataclass(frozen=True)
class ProsodyConfig:
    ling_dim: int = LINGUISTIC_DIM
    style_dim: int = NUM_STYLES
    speaker_dim: int = 8
    num_speakers: int = 4
    hidden: int = 256
    attn_dim: int = 128
    seed: int = 0


@dataclass(frozen=True)
class ProsodyTrack:
    durations: np.ndarray  # frames per phoneme, all >= 1
    f0: np.ndarray         # Hz per frame, 0 marks unvoiced

    def __post_init__(self):
        durations = np.asarray(self.durations, dtype=np.int64)
        f0 = np.asarray(self.f0, dtype=np.float64)
        if (durations < 1).any():
            raise ValueError("phoneme durations must all be >= 1 frame")
        if durations.sum() != len(f0):
            raise ValueError(f"duration sum {durations.sum()} != contour length {len(f0)}")
        voiced = f0 > 0
        if voiced.any() and ((f0[voiced] < F0_FLOOR) | (f0[voiced] > F0_CEIL)).any():
            raise ValueError(f"voiced F0 must lie in [{F0_FLOOR}, {F0_CEIL}] Hz")
        object.__setattr__(self, "durations", durations)
        object.__setattr__(self, "f0", f0)

    @property
    def total_frames(self) -> int:
        return int(self.durations.sum())


class ProsodyModel(nn.Module):
    def __init__(self, config: ProsodyConfig):
        super().__init__()
        self.config = config
        self.trained = False
        self.speaker_emb = nn.Embedding(config.num_speakers, config.speaker_dim)
        step_dim = config.ling_dim + config.style_dim + config.speaker_dim
        self.cell = nn.LSTMCell(step_dim, config.hidden)
        self.key_proj = nn.Linear(config.ling_dim, config.attn_dim)
        self.value_proj = nn.Linear(config.ling_dim, config.attn_dim)
        self.query_proj = nn.Linear(config.hidden, config.attn_dim)
        self.out = nn.Linear(config.hidden + config.attn_dim, 4)

    def forward(self, ling: Tensor, style: Tensor, speaker: Tensor, mask: Tensor | None = None) -> Tensor:
        """Per-phoneme predictions [B, N, 4]: log_dur, f0_start, f0_end, voiced logit.

        ling: [B, N, ling_dim]; style: [B, style_dim]; speaker: [B] long;
        mask: [B, N] bool, True on real steps (attention ignores padding).
        """
        b, n, _ = ling.shape
        spk = self.speaker_emb(speaker)
        cond = torch.cat([style, spk], dim=1)
        keys = self.key_proj(ling)
        values = self.value_proj(ling)
        scale = 1.0 / math.sqrt(self.config.attn_dim)
        h = ling.new_zeros(b, self.config.hidden)
        c = ling.new_zeros(b, self.config.hidden)
        outs = []
        for t in range(n):
            step = torch.cat([ling[:, t], cond], dim=1)
            h, c = self.cell(step, (h, c))
            scores = torch.bmm(keys, self.query_proj(h).unsqueeze(2)).squeeze(2) * scale
            if mask is not None:
                scores = scores.masked_fill(~mask, float("-inf"))
            attn = torch.softmax(scores, dim=1)
            context = torch.bmm(attn.unsqueeze(1), values).squeeze(1)
            outs.append(self.out(torch.cat([h, context], dim=1)))
        return torch.stack(outs, dim=1)


def build_prosody_model(config: ProsodyConfig) -> ProsodyModel:
    torch.manual_seed(config.seed)
    return ProsodyModel(config)


@torch.no_grad()
def predict_prosody(
    model: ProsodyModel,
    ling: LinguisticSequence,
    style: StyleEmbedding,
    speaker: int = 0,
    strict: bool = True,
) -> ProsodyTrack:
    """Deterministic inference for one utterance."""
    if strict and not model.trained:
        raise RuntimeError("prosody model is untrained (pass strict=False to override)")
    was_training = model.training
    model.eval()
    try:
        ling_t = torch.from_numpy(ling.features).float().unsqueeze(0)
        style_t = torch.from_numpy(style.p).float().unsqueeze(0)
        spk_t = torch.tensor([speaker], dtype=torch.long)
        pred = model(ling_t, style_t, spk_t)[0].numpy()
    finally:
        model.train(was_training)

    durations = np.clip(np.round(np.exp(pred[:, 0])), 1, MAX_PHONEME_FRAMES).astype(np.int64)
    voiced = 1.0 / (1.0 + np.exp(-pred[:, 3])) > 0.5
    f0_start = np.clip(pred[:, 1] * F0_SCALE, F0_FLOOR, F0_CEIL)
    f0_end = np.clip(pred[:, 2] * F0_SCALE, F0_FLOOR, F0_CEIL)

    contour = np.zeros(int(durations.sum()))
    pos = 0
    for i, dur in enumerate(durations):
        if voiced[i]:
            contour[pos : pos + dur] = np.linspace(f0_start[i], f0_end[i], dur)
        pos += dur
    return ProsodyTrack(durations=durations, f0=contour)
