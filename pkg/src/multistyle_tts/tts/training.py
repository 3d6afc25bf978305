"""Multi-style TTS training: target extraction and joint MSE training of
the prosody and acoustic models.

Targets come straight from the audio: total frames from the spectral
analysis, durations by uniform split across phonemes (a desk-scale stand-in
for forced alignment), per-phoneme F0 endpoints from the tracked contour,
and 13 cepstra per frame.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from ..audio import read_wav, resample
from ..corpus.features import FeatureConfig, extract_mfcc
from ..corpus.manifest import Corpus
from ..f0 import analyze_f0
from ..stylemodel.embedding import StyleEmbedding
from .acoustic_model import AcousticModel, upsample_linguistic
from .frontend import Lexicon, LinguisticSequence, text_to_linguistic
from .prosody_model import F0_SCALE, ProsodyModel, ProsodyTrack


@dataclass(frozen=True)
class TtsTrainConfig:
    sample_rate: int = 24000
    lr: float = 1e-3
    batch_size: int = 16
    epochs: int = 300
    seed: int = 0


@dataclass
class TtsTarget:
    utt_id: str
    ling: LinguisticSequence
    style: StyleEmbedding
    speaker: int
    durations: np.ndarray       # per phoneme
    f0_endpoints: np.ndarray    # per phoneme: start, end (Hz)
    voiced: np.ndarray          # per phoneme bool
    f0_contour: np.ndarray      # per frame, Hz
    mfcc: np.ndarray            # T x 13


@dataclass
class TtsEpochStats:
    epoch: int
    prosody_loss: float
    acoustic_loss: float


def extract_tts_targets(
    corpus: Corpus,
    embeddings: dict[str, StyleEmbedding],
    config: TtsTrainConfig = TtsTrainConfig(),
    lexicon: Lexicon | None = None,
    split: str | None = "train",
) -> list[TtsTarget]:
    """Per-utterance training targets. Raises if an utterance has no style
    embedding, naming the offenders."""
    utts = corpus.utterances if split is None else corpus.split(split)
    missing = [u.id for u in utts if u.id not in embeddings]
    if missing:
        raise ValueError(f"utterances missing style embeddings: {missing[:5]}" + ("..." if len(missing) > 5 else ""))

    fconfig = FeatureConfig(sample_rate=config.sample_rate)
    targets = []
    for utt in utts:
        wav = resample(read_wav(utt.audio_ref), config.sample_rate)
        ling = text_to_linguistic(utt.text, lexicon)
        mfcc = extract_mfcc(wav, fconfig)[:, :13]
        contour = analyze_f0(wav).f0
        t = min(len(mfcc), len(contour))
        n = len(ling)
        if t < n:
            raise ValueError(f"{utt.id}: {t} frames cannot cover {n} phonemes")
        mfcc, contour = mfcc[:t], contour[:t]

        base, rem = divmod(t, n)
        durations = np.full(n, base, dtype=np.int64)
        durations[:rem] += 1

        endpoints = np.zeros((n, 2))
        voiced = np.zeros(n, dtype=bool)
        pos = 0
        for i, dur in enumerate(durations):
            seg = contour[pos : pos + dur]
            seg_voiced = seg[seg > 0]
            if len(seg_voiced) > 0.5 * dur:
                voiced[i] = True
                endpoints[i] = (seg_voiced[0], seg_voiced[-1])
            pos += dur

        targets.append(
            TtsTarget(
                utt_id=utt.id,
                ling=ling,
                style=embeddings[utt.id],
                speaker=0,
                durations=durations,
                f0_endpoints=endpoints,
                voiced=voiced,
                f0_contour=contour,
                mfcc=mfcc,
            )
        )
    return targets


def _prosody_tensors(targets: list[TtsTarget]) -> dict:
    """All targets padded into shared tensors, built once per training run."""
    n_max = max(len(t.ling) for t in targets)
    b = len(targets)
    dim = targets[0].ling.features.shape[1]
    ling = torch.zeros(b, n_max, dim)
    mask = torch.zeros(b, n_max, dtype=torch.bool)
    log_dur = torch.zeros(b, n_max)
    f0 = torch.zeros(b, n_max, 2)
    voiced = torch.zeros(b, n_max)
    style = torch.zeros(b, targets[0].style.p.shape[0])
    speaker = torch.zeros(b, dtype=torch.long)
    lengths = torch.zeros(b, dtype=torch.long)
    for i, t in enumerate(targets):
        n = len(t.ling)
        lengths[i] = n
        ling[i, :n] = torch.from_numpy(t.ling.features).float()
        mask[i, :n] = True
        log_dur[i, :n] = torch.from_numpy(np.log(t.durations.astype(np.float64))).float()
        f0[i, :n] = torch.from_numpy(t.f0_endpoints / F0_SCALE).float()
        voiced[i, :n] = torch.from_numpy(t.voiced.astype(np.float64)).float()
        style[i] = torch.from_numpy(t.style.p).float()
        speaker[i] = t.speaker
    return dict(
        ling=ling, mask=mask, log_dur=log_dur, f0=f0, voiced=voiced, style=style, speaker=speaker, lengths=lengths
    )


def _acoustic_tensors(targets: list[TtsTarget]) -> dict:
    frames = [upsample_linguistic(t.ling, ProsodyTrack(t.durations, t.f0_contour)) for t in targets]
    t_max = max(len(f) for f in frames)
    b = len(targets)
    dim = frames[0].shape[1]
    x = torch.zeros(b, t_max, dim)
    y = torch.zeros(b, t_max, targets[0].mfcc.shape[1])
    mask = torch.zeros(b, t_max, dtype=torch.bool)
    style = torch.zeros(b, targets[0].style.p.shape[0])
    speaker = torch.zeros(b, dtype=torch.long)
    lengths = torch.zeros(b, dtype=torch.long)
    for i, (t, f) in enumerate(zip(targets, frames)):
        lengths[i] = len(f)
        x[i, : len(f)] = torch.from_numpy(f).float()
        y[i, : len(t.mfcc)] = torch.from_numpy(t.mfcc).float()
        mask[i, : len(f)] = True
        style[i] = torch.from_numpy(t.style.p).float()
        speaker[i] = t.speaker
    return dict(x=x, y=y, mask=mask, style=style, speaker=speaker, lengths=lengths)


def train_tts(
    prosody_model: ProsodyModel,
    acoustic_model: AcousticModel,
    targets: list[TtsTarget],
    config: TtsTrainConfig = TtsTrainConfig(),
) -> list[TtsEpochStats]:
    """MSE training of both models; deterministic for a fixed seed."""
    if not targets:
        raise ValueError("no training targets")
    torch.manual_seed(config.seed)
    rng = np.random.default_rng(config.seed)
    p_opt = torch.optim.Adam(prosody_model.parameters(), lr=config.lr)
    a_opt = torch.optim.Adam(acoustic_model.parameters(), lr=config.lr)
    bce = torch.nn.BCEWithLogitsLoss(reduction="none")

    pt = _prosody_tensors(targets)
    at = _acoustic_tensors(targets)

    history: list[TtsEpochStats] = []
    for epoch in range(config.epochs):
        prosody_model.train()
        acoustic_model.train()
        order = rng.permutation(len(targets))
        p_losses, a_losses = [], []
        for start in range(0, len(targets), config.batch_size):
            idx = torch.from_numpy(order[start : start + config.batch_size].copy())

            n = int(pt["lengths"][idx].max())
            ling, mask = pt["ling"][idx, :n], pt["mask"][idx, :n]
            p_opt.zero_grad()
            pred = prosody_model(ling, pt["style"][idx], pt["speaker"][idx], mask)
            m = mask.float()
            denom = m.sum().clamp(min=1.0)
            dur_loss = (m * (pred[:, :, 0] - pt["log_dur"][idx, :n]) ** 2).sum() / denom
            vmask = m * pt["voiced"][idx, :n]
            vdenom = vmask.sum().clamp(min=1.0)
            f0_loss = (vmask.unsqueeze(2) * (pred[:, :, 1:3] - pt["f0"][idx, :n]) ** 2).sum() / (2 * vdenom)
            voiced_loss = (m * bce(pred[:, :, 3], pt["voiced"][idx, :n])).sum() / denom
            p_loss = dur_loss + f0_loss + voiced_loss
            p_loss.backward()
            p_opt.step()
            p_losses.append(p_loss.item())

            t = int(at["lengths"][idx].max())
            a_opt.zero_grad()
            out = acoustic_model(at["x"][idx, :t], at["style"][idx], at["speaker"][idx])
            am = at["mask"][idx, :t].float().unsqueeze(2)
            a_loss = (am * (out - at["y"][idx, :t]) ** 2).sum() / (am.sum().clamp(min=1.0) * out.shape[2])
            a_loss.backward()
            a_opt.step()
            a_losses.append(a_loss.item())

        history.append(
            TtsEpochStats(epoch=epoch, prosody_loss=float(np.mean(p_losses)), acoustic_loss=float(np.mean(a_losses)))
        )

    prosody_model.trained = True
    acoustic_model.trained = True
    prosody_model.eval()
    acoustic_model.eval()
    return history


def save_tts_history(path: str | Path, history: list[TtsEpochStats]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["epoch", "prosody_loss", "acoustic_loss"])
        for h in history:
            writer.writerow([h.epoch, f"{h.prosody_loss:.6f}", f"{h.acoustic_loss:.6f}"])
