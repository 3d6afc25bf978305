"""Listening-test construction and scoring: ABX, preference, per-style F0
statistics, and query-match rates."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .audio import Waveform, read_wav
from .corpus.labels import StyleLabel
from .f0 import estimate_f0

PREFERENCE_ARMS = ("baseline", "multi_style_neutral", "multi_style_other")


@dataclass(frozen=True)
class ABXItem:
    id: str
    style_a: StyleLabel
    style_b: StyleLabel
    ref_style: StyleLabel
    audio_a: str
    audio_b: str
    audio_x: str
    correct: str  # "A" or "B"

    def __post_init__(self):
        if self.style_a == self.style_b:
            raise ValueError("ABX item needs two different styles")
        if self.ref_style not in (self.style_a, self.style_b):
            raise ValueError("reference style must be one of the pair")
        expected = "A" if self.ref_style == self.style_a else "B"
        if self.correct != expected:
            raise ValueError(f"correct={self.correct} inconsistent with ref_style")
        if len({self.audio_a, self.audio_b, self.audio_x}) != 3:
            raise ValueError("A, B and X must be three distinct utterances")


@dataclass(frozen=True)
class Answer:
    session_id: str
    item_id: str
    choice: str
    timestamp: float = 0.0


def build_abx(pool: dict[StyleLabel, Sequence[str]], seed: int = 0) -> list[ABXItem]:
    """One item per unordered style pair; X drawn from one of the two styles,
    never the same utterance as the chosen A/B stimulus."""
    styles = sorted(pool.keys())
    if len(styles) < 2:
        raise ValueError("need at least two styles")
    for style in styles:
        if len(pool[style]) < 2:
            raise ValueError(f"style {style.name} needs at least 2 pool samples, has {len(pool[style])}")
    rng = np.random.default_rng(seed)
    items = []
    # Item ids are opaque indices; style names must never reach a listener.
    for idx, (style_a, style_b) in enumerate(combinations(styles, 2)):
        a = str(rng.choice(pool[style_a]))
        b = str(rng.choice(pool[style_b]))
        ref_style = style_a if rng.random() < 0.5 else style_b
        taken = a if ref_style == style_a else b
        remaining = [s for s in pool[ref_style] if s != taken]
        x = str(rng.choice(remaining))
        items.append(
            ABXItem(
                id=f"abx{idx:03d}",
                style_a=style_a,
                style_b=style_b,
                ref_style=ref_style,
                audio_a=a,
                audio_b=b,
                audio_x=x,
                correct="A" if ref_style == style_a else "B",
            )
        )
    return items


@dataclass
class ABXReport:
    accuracy: float
    total: int
    matches: int
    per_pair: dict[tuple[str, str], tuple[int, int]]  # (matches, total) keyed by style names

    @property
    def percent(self) -> float:
        return 100.0 * self.accuracy


def score_abx(answers: Iterable[Answer], items: Sequence[ABXItem]) -> ABXReport:
    by_id = {item.id: item for item in items}
    matches = 0
    total = 0
    per_pair: dict[tuple[str, str], list[int]] = {}
    for ans in answers:
        item = by_id.get(ans.item_id)
        if item is None:
            raise ValueError(f"answer references unknown item {ans.item_id!r}")
        if ans.choice not in ("A", "B"):
            raise ValueError(f"invalid ABX choice {ans.choice!r}")
        key = (item.style_a.name.lower(), item.style_b.name.lower())
        cell = per_pair.setdefault(key, [0, 0])
        hit = ans.choice == item.correct
        matches += hit
        cell[0] += hit
        cell[1] += 1
        total += 1
    if total == 0:
        raise ValueError("no answers to score")
    return ABXReport(
        accuracy=matches / total,
        total=total,
        matches=matches,
        per_pair={k: (v[0], v[1]) for k, v in per_pair.items()},
    )


@dataclass
class PreferenceReport:
    percentages: dict[str, float]  # arm -> percent
    tallies: dict[str, int]
    total: int


def score_preference(answers: Iterable[Answer]) -> PreferenceReport:
    tallies = {arm: 0 for arm in PREFERENCE_ARMS}
    total = 0
    for ans in answers:
        if ans.choice not in tallies:
            raise ValueError(f"invalid preference choice {ans.choice!r}")
        tallies[ans.choice] += 1
        total += 1
    if total == 0:
        raise ValueError("no answers to score")
    percentages = {arm: 100.0 * n / total for arm, n in tallies.items()}
    return PreferenceReport(percentages=percentages, tallies=tallies, total=total)


@dataclass
class F0StatsRow:
    style: StyleLabel
    mean_hz: float
    std_hz: float
    count: int


@dataclass
class F0StatsTable:
    rows: dict[StyleLabel, F0StatsRow] = field(default_factory=dict)
    absent: list[StyleLabel] = field(default_factory=list)


def f0_statistics(groups: dict[StyleLabel, Sequence[Waveform | str | Path]]) -> F0StatsTable:
    """Per style: mean and population std of per-utterance voiced-F0 means.

    A group whose samples have no voiced frames at all is marked absent."""
    table = F0StatsTable()
    for style in sorted(groups.keys()):
        means = []
        for sample in groups[style]:
            wav = sample if isinstance(sample, Waveform) else read_wav(sample)
            contour = estimate_f0(wav)
            voiced = contour[contour > 0]
            if voiced.size:
                means.append(float(voiced.mean()))
        if not means:
            table.absent.append(style)
            continue
        arr = np.asarray(means)
        table.rows[style] = F0StatsRow(
            style=style, mean_hz=float(arr.mean()), std_hz=float(arr.std()), count=len(arr)
        )
    return table


def score_query_match(judgments: Iterable[Answer | bool]) -> float:
    """Fraction of query/response pairs judged a good match."""
    good = 0
    total = 0
    for j in judgments:
        if isinstance(j, Answer):
            if j.choice not in ("good", "bad"):
                raise ValueError(f"invalid query-match choice {j.choice!r}")
            good += j.choice == "good"
        else:
            good += bool(j)
        total += 1
    if total == 0:
        raise ValueError("no judgments to score")
    return good / total


# --- preference / query-match item construction (service test pools) ---


@dataclass(frozen=True)
class PreferenceItem:
    """One text rendered three ways; slots r1/r2/r3 hide which arm is which."""

    id: str
    slots: dict[str, str]      # slot name -> audio ref
    arm_by_slot: dict[str, str]  # slot name -> arm (server-side only)


def build_preference_items(
    renditions: dict[str, dict[str, str]], seed: int = 0
) -> list[PreferenceItem]:
    """renditions: item id -> {arm: audio ref} covering all three arms."""
    rng = np.random.default_rng(seed)
    items = []
    for item_id in sorted(renditions.keys()):
        arms = renditions[item_id]
        missing = [a for a in PREFERENCE_ARMS if a not in arms]
        if missing:
            raise ValueError(f"item {item_id!r} missing arms {missing}")
        order = list(PREFERENCE_ARMS)
        rng.shuffle(order)
        slots = {f"r{i + 1}": arms[arm] for i, arm in enumerate(order)}
        arm_by_slot = {f"r{i + 1}": arm for i, arm in enumerate(order)}
        items.append(PreferenceItem(id=item_id, slots=slots, arm_by_slot=arm_by_slot))
    return items


@dataclass(frozen=True)
class QueryMatchItem:
    id: str
    query_audio: str
    response_audio: str


def build_query_match_items(pairs: dict[str, tuple[str, str]]) -> list[QueryMatchItem]:
    return [
        QueryMatchItem(id=item_id, query_audio=q, response_audio=r)
        for item_id, (q, r) in sorted(pairs.items())
    ]


# --- JSONL persistence ---


def save_abx_items(path: str | Path, items: Sequence[ABXItem]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for item in items:
            rec = asdict(item)
            rec["style_a"] = item.style_a.name.lower()
            rec["style_b"] = item.style_b.name.lower()
            rec["ref_style"] = item.ref_style.name.lower()
            f.write(json.dumps(rec) + "\n")


def load_abx_items(path: str | Path) -> list[ABXItem]:
    items = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            items.append(
                ABXItem(
                    id=rec["id"],
                    style_a=StyleLabel[rec["style_a"].upper()],
                    style_b=StyleLabel[rec["style_b"].upper()],
                    ref_style=StyleLabel[rec["ref_style"].upper()],
                    audio_a=rec["audio_a"],
                    audio_b=rec["audio_b"],
                    audio_x=rec["audio_x"],
                    correct=rec["correct"],
                )
            )
    return items


def save_answers(path: str | Path, answers: Sequence[Answer]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for ans in answers:
            f.write(json.dumps(asdict(ans)) + "\n")


def load_answers(path: str | Path) -> list[Answer]:
    out = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                rec = json.loads(line)
                out.append(Answer(**rec))
    return out
