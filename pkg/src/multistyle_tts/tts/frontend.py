"""Linguistic frontend: text normalization, dictionary G2P with letter
fallback, and per-phoneme feature vectors.

The phoneme inventory is a 39-symbol ARPAbet-like set plus a pause symbol
and one fallback symbol per letter, used for out-of-lexicon words. Each
phoneme's feature vector is its one-hot plus five scalars: position in word,
position in utterance (both in [0, 1]), word-final flag, pause-after flag,
and utterance-final flag.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

ARPABET = (
    "AA AE AH AO AW AY B CH D DH EH ER EY F G HH IH IY JH K L M N NG "
    "OW OY P R S SH T TH UH UW V W Y Z ZH"
).split()
PAUSE = "PAU"
LETTER_FALLBACK = tuple(f"#{c}" for c in "ABCDEFGHIJKLMNOPQRSTUVWXYZ")
PHONEME_INVENTORY = tuple(ARPABET) + (PAUSE,) + LETTER_FALLBACK
PHONEME_INDEX = {p: i for i, p in enumerate(PHONEME_INVENTORY)}

NUM_EXTRA_FEATURES = 5
LINGUISTIC_DIM = len(PHONEME_INVENTORY) + NUM_EXTRA_FEATURES

_PAUSE_PUNCT = set(".,;:!?")

_ONES = "zero one two three four five six seven eight nine".split()
_TEENS = "ten eleven twelve thirteen fourteen fifteen sixteen seventeen eighteen nineteen".split()
_TENS = "zero ten twenty thirty forty fifty sixty seventy eighty ninety".split()


def expand_number(n: int) -> str:
    """Cardinal words for 0..9999."""
    if not 0 <= n <= 9999:
        raise ValueError(f"number out of supported range 0..9999: {n}")
    if n < 10:
        return _ONES[n]
    if n < 20:
        return _TEENS[n - 10]
    if n < 100:
        tens, ones = divmod(n, 10)
        return _TENS[tens] + ("" if ones == 0 else " " + _ONES[ones])
    if n < 1000:
        hundreds, rest = divmod(n, 100)
        out = _ONES[hundreds] + " hundred"
        return out if rest == 0 else out + " " + expand_number(rest)
    thousands, rest = divmod(n, 1000)
    out = _ONES[thousands] + " thousand"
    return out if rest == 0 else out + " " + expand_number(rest)


class Lexicon:
    """word -> phoneme list lookup with a per-letter fallback for OOV words."""

    def __init__(self, entries: dict[str, list[str]]):
        for word, phones in entries.items():
            bad = [p for p in phones if p not in PHONEME_INDEX]
            if bad:
                raise ValueError(f"lexicon entry {word!r} uses unknown phonemes {bad}")
        self.entries = entries

    @staticmethod
    def load(path: str | Path) -> "Lexicon":
        entries: dict[str, list[str]] = {}
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                word, _, phones = line.partition("\t")
                entries[word.strip().lower()] = phones.split()
        return Lexicon(entries)

    def phonemes(self, word: str) -> list[str]:
        hit = self.entries.get(word)
        if hit is not None:
            return list(hit)
        return [f"#{c.upper()}" for c in word if c.isascii() and c.isalpha()] or [PAUSE]

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)


_default_lexicon: Lexicon | None = None


def default_lexicon() -> Lexicon:
    global _default_lexicon
    if _default_lexicon is None:
        with resources.as_file(resources.files(__package__) / "lexicon.txt") as p:
            _default_lexicon = Lexicon.load(p)
    return _default_lexicon


@dataclass(frozen=True)
class LinguisticSequence:
    phonemes: tuple[str, ...]
    features: np.ndarray  # N x LINGUISTIC_DIM
    words: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.phonemes)


_WORD_OR_NUM = re.compile(r"[a-z']+|\d+")


def _normalize(text: str) -> list[tuple[str, bool]]:
    """(word, pause_after) pairs: lowercased, numbers expanded, punctuation
    folded into pause flags."""
    out: list[tuple[str, bool]] = []
    for token in re.findall(r"\S+", text.lower()):
        pause = any(c in _PAUSE_PUNCT for c in token)
        words: list[str] = []
        for m in _WORD_OR_NUM.finditer(token):
            chunk = m.group(0)
            if chunk.isdigit():
                words.extend(expand_number(int(chunk)).split())
            else:
                words.append(chunk)
        for i, w in enumerate(words):
            out.append((w, pause and i == len(words) - 1))
    return out


def text_to_linguistic(text: str, lexicon: Lexicon | None = None) -> LinguisticSequence:
    """Normalize text and map it to phonemes with per-phoneme features.

    Punctuation becomes a pause phoneme after the word that carries it, with
    the pause flag set on it. Empty text (after normalization) is an error.
    """
    lexicon = lexicon if lexicon is not None else default_lexicon()
    words = _normalize(text)
    if not words:
        raise ValueError(f"text is empty after normalization: {text!r}")

    phonemes: list[str] = []
    spans: list[tuple[int, int, bool]] = []  # word start, end, pause_after
    for word, pause in words:
        phones = lexicon.phonemes(word)
        start = len(phonemes)
        phonemes.extend(phones)
        if pause:
            phonemes.append(PAUSE)
        spans.append((start, len(phonemes), pause))

    n = len(phonemes)
    feats = np.zeros((n, LINGUISTIC_DIM))
    base = len(PHONEME_INVENTORY)
    for start, end, pause in spans:
        width = end - start
        for j in range(start, end):
            feats[j, PHONEME_INDEX[phonemes[j]]] = 1.0
            feats[j, base + 0] = (j - start) / (width - 1) if width > 1 else 0.0
            feats[j, base + 1] = j / (n - 1) if n > 1 else 0.0
        feats[end - 1, base + 2] = 1.0
        if pause:
            feats[end - 1, base + 3] = 1.0
            if end - start >= 2:
                feats[end - 2, base + 3] = 1.0
    feats[n - 1, base + 4] = 1.0
    return LinguisticSequence(
        phonemes=tuple(phonemes),
        features=feats,
        words=tuple(w for w, _ in words),
    )
