"""300-dim word-token embeddings with pluggable providers.

The default provider derives a deterministic unit vector from a hash of the
token, so tests never need an external embedding download. A loader for
plain-text word-vector files ("word v1 ... v300" per line) is also provided.
"""

from __future__ import annotations

import hashlib
import re
from pathlib import Path
from typing import Protocol

import numpy as np

EMBEDDING_DIM = 300

_TOKEN_RE = re.compile(r"[a-z0-9']+")


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens split on whitespace and punctuation."""
    return _TOKEN_RE.findall(text.lower())


class EmbeddingProvider(Protocol):
    def vector(self, token: str) -> np.ndarray: ...


class HashEmbeddingProvider:
    """Deterministic unit vectors seeded from a stable hash of each token.

    Identical tokens always map to identical vectors, across processes and
    runs. Every token is effectively "out of vocabulary" and gets the same
    fallback treatment.
    """

    def __init__(self, dim: int = EMBEDDING_DIM):
        self.dim = dim
        self._cache: dict[str, np.ndarray] = {}

    def vector(self, token: str) -> np.ndarray:
        cached = self._cache.get(token)
        if cached is not None:
            return cached
        digest = hashlib.sha256(token.encode("utf-8")).digest()
        seed = int.from_bytes(digest[:8], "little")
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(self.dim)
        v /= np.linalg.norm(v)
        self._cache[token] = v
        return v


class WordVectorProvider:
    """Text word-vector file loader; hash fallback for out-of-vocabulary tokens."""

    def __init__(self, path: str | Path, dim: int = EMBEDDING_DIM):
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"word-vector file not found: {path}")
        self.dim = dim
        self._fallback = HashEmbeddingProvider(dim)
        self.table: dict[str, np.ndarray] = {}
        with open(path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                parts = line.rstrip("\n").split(" ")
                if len(parts) != dim + 1:
                    raise ValueError(f"{path}:{lineno}: expected word + {dim} floats, got {len(parts)} fields")
                self.table[parts[0]] = np.asarray([float(x) for x in parts[1:]])

    def vector(self, token: str) -> np.ndarray:
        hit = self.table.get(token)
        return hit if hit is not None else self._fallback.vector(token)


def embed_tokens(text: str, provider: EmbeddingProvider) -> tuple[list[str], np.ndarray]:
    """Tokenize and embed, one 300-vector row per token.

    Empty text yields an empty 0 x 300 matrix; callers decide how to handle it.
    """
    tokens = tokenize(text)
    if not tokens:
        return [], np.zeros((0, EMBEDDING_DIM))
    return tokens, np.stack([provider.vector(t) for t in tokens])
