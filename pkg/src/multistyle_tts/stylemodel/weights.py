"""Inverse-prior class weights with the neutral prior capped."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..corpus.labels import NUM_STYLES, StyleLabel

NEUTRAL_PRIOR_CAP = 0.25


@dataclass(frozen=True)
class ClassWeights:
    w: np.ndarray
    cap: float = NEUTRAL_PRIOR_CAP

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if w.shape != (NUM_STYLES,):
            raise ValueError(f"expected {NUM_STYLES} weights, got shape {w.shape}")
        if (w < 0).any():
            raise ValueError("class weights must be nonnegative")
        object.__setattr__(self, "w", w)

    def __getitem__(self, style: StyleLabel | int) -> float:
        return float(self.w[int(style)])


def class_weights(train_counts, cap: float = NEUTRAL_PRIOR_CAP) -> ClassWeights:
    """w_c = 1 / prior_c with the neutral prior capped at `cap`.

    Priors of the other classes are not renormalized after capping; classes
    with zero training count get weight 0 (they are excluded from loss and
    from weighted accuracy).
    """
    counts = np.asarray(train_counts, dtype=np.float64)
    if counts.shape != (NUM_STYLES,):
        raise ValueError(f"expected {NUM_STYLES} counts, got shape {counts.shape}")
    if (counts < 0).any():
        raise ValueError("counts must be nonnegative")
    total = counts.sum()
    if total == 0:
        raise ValueError("all class counts are zero")
    priors = counts / total
    priors[StyleLabel.NEUTRAL] = min(priors[StyleLabel.NEUTRAL], cap)
    w = np.zeros(NUM_STYLES)
    positive = counts > 0
    w[positive] = 1.0 / priors[positive]
    return ClassWeights(w=w, cap=cap)
