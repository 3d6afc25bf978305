"""The 6-way speaking-style taxonomy and source-label mapping."""

from __future__ import annotations

from enum import IntEnum
from typing import Optional


class StyleLabel(IntEnum):
    """Canonical styles. The index order is fixed and shared by every
    embedding vector, class-weight vector and confusion matrix in the system."""

    RUSHED = 0
    SOFT = 1
    NEUTRAL = 2
    HAPPY = 3
    ANGRY = 4
    SAD = 5


NUM_STYLES = len(StyleLabel)

STYLE_NAMES = tuple(s.name.lower() for s in StyleLabel)

# External (emotion-recognition) corpora only cover a 4-class subset; the
# excited emotion folds into happy, everything else is dropped.
_EXTERNAL_MAP = {
    "neutral": StyleLabel.NEUTRAL,
    "neu": StyleLabel.NEUTRAL,
    "happy": StyleLabel.HAPPY,
    "hap": StyleLabel.HAPPY,
    "excited": StyleLabel.HAPPY,
    "exc": StyleLabel.HAPPY,
    "sad": StyleLabel.SAD,
    "angry": StyleLabel.ANGRY,
    "anger": StyleLabel.ANGRY,
    "ang": StyleLabel.ANGRY,
}

_TTS_MAP = {name: label for name, label in zip(STYLE_NAMES, StyleLabel)}


def style_from_name(name: str) -> StyleLabel:
    """Strict lookup of a canonical style name. Raises on anything else."""
    try:
        return _TTS_MAP[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown style name: {name!r}") from None


def map_label(raw: str, corpus_kind: str) -> Optional[StyleLabel]:
    """Map a source-corpus label string onto the canonical taxonomy.

    TTS-corpus labels map 1:1 onto the six styles. External-corpus labels map
    onto the {neutral, happy, sad, angry} subset with excited merged into
    happy; anything outside that subset returns None and the utterance is
    excluded. Never raises for unmappable labels.
    """
    if corpus_kind not in ("tts", "external"):
        raise ValueError(f"corpus_kind must be 'tts' or 'external', got {corpus_kind!r}")
    key = raw.strip().lower()
    if corpus_kind == "tts":
        return _TTS_MAP.get(key)
    return _EXTERNAL_MAP.get(key)
