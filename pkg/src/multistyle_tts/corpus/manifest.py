"""JSONL corpus manifests: one utterance record per line.

Record fields: {id, audio, text, speaker, style?, split, corpus}. Paths in
the `audio` field are resolved relative to the manifest's directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional

from .labels import StyleLabel, map_label

SPLITS = ("train", "dev", "test")

_REQUIRED_FIELDS = ("id", "audio", "text", "speaker", "split", "corpus")


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class Utterance:
    id: str
    audio_ref: Path
    text: str
    speaker_id: str
    style_label: Optional[StyleLabel]
    corpus_id: str
    split: str
    raw_style: Optional[str] = None


@dataclass
class Corpus:
    corpus_id: str
    kind: str  # "tts" or "external"
    utterances: list[Utterance] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self) -> Iterator[Utterance]:
        return iter(self.utterances)

    def split(self, name: str) -> list[Utterance]:
        if name not in SPLITS:
            raise ValueError(f"unknown split {name!r}")
        return [u for u in self.utterances if u.split == name]

    def labeled(self, split: Optional[str] = None) -> list[Utterance]:
        pool = self.utterances if split is None else self.split(split)
        return [u for u in pool if u.style_label is not None]

    def label_counts(self, split: Optional[str] = None) -> list[int]:
        """Per-class utterance counts in canonical style order."""
        counts = [0] * len(StyleLabel)
        for u in self.labeled(split):
            counts[int(u.style_label)] += 1
        return counts


def load_manifest(path: str | Path, corpus_kind: str = "tts") -> Corpus:
    """Load a JSONL manifest into a Corpus.

    Unknown style strings pass through map_label (so external labels outside
    the supported subset simply leave the utterance unlabeled). Malformed
    lines and duplicate ids raise ManifestError naming the offending line.
    """
    path = Path(path)
    if not path.exists():
        raise ManifestError(f"manifest not found: {path}")
    base = path.parent
    utterances: list[Utterance] = []
    seen_ids: set[str] = set()
    corpus_id = None
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            missing = [k for k in _REQUIRED_FIELDS if k not in rec]
            if missing:
                raise ManifestError(f"{path}:{lineno}: missing field(s) {missing}")
            if rec["split"] not in SPLITS:
                raise ManifestError(f"{path}:{lineno}: bad split {rec['split']!r}")
            if rec["id"] in seen_ids:
                raise ManifestError(f"{path}:{lineno}: duplicate id {rec['id']!r}")
            seen_ids.add(rec["id"])
            if corpus_id is None:
                corpus_id = rec["corpus"]
            raw_style = rec.get("style")
            label = map_label(raw_style, corpus_kind) if raw_style is not None else None
            audio = Path(rec["audio"])
            if not audio.is_absolute():
                audio = base / audio
            utterances.append(
                Utterance(
                    id=rec["id"],
                    audio_ref=audio,
                    text=rec["text"],
                    speaker_id=rec["speaker"],
                    style_label=label,
                    corpus_id=rec["corpus"],
                    split=rec["split"],
                    raw_style=raw_style,
                )
            )
    return Corpus(corpus_id=corpus_id or path.stem, kind=corpus_kind, utterances=utterances)


def save_manifest(path: str | Path, corpus: Corpus) -> None:
    """Write a Corpus back out as JSONL with audio paths relative to the manifest."""
    path = Path(path)
    base = path.parent
    with open(path, "w", encoding="utf-8") as f:
        for u in corpus.utterances:
            audio = u.audio_ref
            try:
                audio = audio.relative_to(base)
            except ValueError:
                pass
            rec = {
                "id": u.id,
                "audio": str(audio),
                "text": u.text,
                "speaker": u.speaker_id,
                "split": u.split,
                "corpus": u.corpus_id,
            }
            if u.raw_style is not None:
                rec["style"] = u.raw_style
            elif u.style_label is not None:
                rec["style"] = u.style_label.name.lower()
            f.write(json.dumps(rec) + "\n")
