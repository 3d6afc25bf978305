"""The 6-dim style probability vector that conditions synthesis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..corpus.labels import NUM_STYLES, StyleLabel

SIMPLEX_TOL = 1e-6


@dataclass(frozen=True)
class StyleEmbedding:
    """A point on the 6-simplex, in canonical style order."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        if p.shape != (NUM_STYLES,):
            raise ValueError(f"style embedding must have {NUM_STYLES} entries, got shape {p.shape}")
        if (p < 0).any():
            raise ValueError("style embedding entries must be nonnegative")
        if abs(p.sum() - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"style embedding must sum to 1 within {SIMPLEX_TOL}, got {p.sum()}")
        object.__setattr__(self, "p", p)

    def argmax(self) -> StyleLabel:
        return StyleLabel(int(np.argmax(self.p)))

    def tolist(self) -> list[float]:
        return [float(x) for x in self.p]

    def __getitem__(self, style: StyleLabel | int) -> float:
        return float(self.p[int(style)])
