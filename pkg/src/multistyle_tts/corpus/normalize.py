"""Corpus-wise z-score normalization of MFCC frames and prosody vectors.

Statistics are always fit on one corpus and tagged with its id; applying a
corpus's own stats zero-centers it, applying them to another corpus is the
intended way to bridge a domain gap at query time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .features import MFCC_DIM, PROSODY_DIM, FeatureBundle

EPSILON = 1e-8


class NormalizationMode(str, Enum):
    NONE = "none"
    MFCC = "mfcc"
    PROSODY = "prosody"
    BOTH = "both"

    @property
    def normalizes_mfcc(self) -> bool:
        return self in (NormalizationMode.MFCC, NormalizationMode.BOTH)

    @property
    def normalizes_prosody(self) -> bool:
        return self in (NormalizationMode.PROSODY, NormalizationMode.BOTH)


@dataclass(frozen=True)
class NormStats:
    corpus_id: str
    mfcc_mean: np.ndarray
    mfcc_std: np.ndarray
    prosody_mean: np.ndarray
    prosody_std: np.ndarray
    epsilon: float = EPSILON

    def __post_init__(self):
        for name, arr, dim in (
            ("mfcc_mean", self.mfcc_mean, MFCC_DIM),
            ("mfcc_std", self.mfcc_std, MFCC_DIM),
            ("prosody_mean", self.prosody_mean, PROSODY_DIM),
            ("prosody_std", self.prosody_std, PROSODY_DIM),
        ):
            if np.asarray(arr).shape != (dim,):
                raise ValueError(f"{name} must have shape ({dim},)")
        if (self.mfcc_std < self.epsilon).any() or (self.prosody_std < self.epsilon).any():
            raise ValueError("std entries below epsilon; fit_normalizer clamps them")

    def save(self, path: str | Path) -> None:
        payload = {
            "corpus_id": self.corpus_id,
            "epsilon": self.epsilon,
            "mfcc_mean": self.mfcc_mean.tolist(),
            "mfcc_std": self.mfcc_std.tolist(),
            "prosody_mean": self.prosody_mean.tolist(),
            "prosody_std": self.prosody_std.tolist(),
        }
        Path(path).write_text(json.dumps(payload))

    @staticmethod
    def load(path: str | Path) -> "NormStats":
        payload = json.loads(Path(path).read_text())
        return NormStats(
            corpus_id=payload["corpus_id"],
            mfcc_mean=np.asarray(payload["mfcc_mean"]),
            mfcc_std=np.asarray(payload["mfcc_std"]),
            prosody_mean=np.asarray(payload["prosody_mean"]),
            prosody_std=np.asarray(payload["prosody_std"]),
            epsilon=payload["epsilon"],
        )


def fit_normalizer(bundles: list[FeatureBundle], corpus_id: str) -> NormStats:
    """Population mean/std over all MFCC frames and all prosody vectors of one corpus.

    Std entries below epsilon are clamped to epsilon; apply_normalizer emits
    exact zeros for those dimensions.
    """
    if len(bundles) < 2:
        raise ValueError(f"need at least 2 utterances to fit a normalizer, got {len(bundles)}")
    frames = np.concatenate([b.mfcc for b in bundles], axis=0)
    pros = np.stack([b.prosody for b in bundles])
    return NormStats(
        corpus_id=corpus_id,
        mfcc_mean=frames.mean(axis=0),
        mfcc_std=np.maximum(frames.std(axis=0), EPSILON),
        prosody_mean=pros.mean(axis=0),
        prosody_std=np.maximum(pros.std(axis=0), EPSILON),
    )


def apply_normalizer(
    bundle: FeatureBundle,
    stats: NormStats,
    mode: NormalizationMode = NormalizationMode.BOTH,
) -> FeatureBundle:
    """Z-score a bundle with the given stats; dimensions whose std was clamped map to 0."""
    mfcc = bundle.mfcc
    prosody = bundle.prosody
    if mode.normalizes_mfcc:
        clamped = stats.mfcc_std <= stats.epsilon
        mfcc = (mfcc - stats.mfcc_mean) / stats.mfcc_std
        mfcc[:, clamped] = 0.0
    if mode.normalizes_prosody:
        clamped = stats.prosody_std <= stats.epsilon
        prosody = (prosody - stats.prosody_mean) / stats.prosody_std
        prosody = np.where(clamped, 0.0, prosody)
    return FeatureBundle(
        mfcc=mfcc,
        prosody=prosody,
        tokens=bundle.tokens,
        token_embeddings=bundle.token_embeddings,
    )
