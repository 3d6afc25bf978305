import json

import pytest

from multistyle_tts.corpus.labels import StyleLabel
from multistyle_tts.corpus.manifest import Corpus, ManifestError, load_manifest, save_manifest


def write_lines(path, lines):
    path.write_text("\n".join(json.dumps(rec) for rec in lines) + "\n")


def record(i, **overrides):
    rec = {
        "id": f"u{i}",
        "audio": f"wav/u{i}.wav",
        "text": "hello world",
        "speaker": "spk0",
        "style": "happy",
        "split": "train",
        "corpus": "demo",
    }
    rec.update(overrides)
    return rec


def test_three_line_manifest(tmp_path):
    path = tmp_path / "m.jsonl"
    write_lines(path, [record(i) for i in range(3)])
    corpus = load_manifest(path)
    assert len(corpus) == 3
    assert corpus.corpus_id == "demo"
    assert all(u.style_label == StyleLabel.HAPPY for u in corpus)
    assert corpus.utterances[0].audio_ref == tmp_path / "wav/u0.wav"


def test_missing_field_names_line(tmp_path):
    path = tmp_path / "m.jsonl"
    rec = record(0)
    del rec["text"]
    write_lines(path, [record(1), rec])
    with pytest.raises(ManifestError, match=r"m\.jsonl:2.*text"):
        load_manifest(path)


def test_duplicate_id_rejected(tmp_path):
    path = tmp_path / "m.jsonl"
    write_lines(path, [record(0), record(0)])
    with pytest.raises(ManifestError, match="duplicate id"):
        load_manifest(path)


def test_invalid_json_names_line(tmp_path):
    path = tmp_path / "m.jsonl"
    path.write_text(json.dumps(record(0)) + "\n{broken\n")
    with pytest.raises(ManifestError, match=r":2"):
        load_manifest(path)


def test_unknown_style_passes_through_map_label(tmp_path):
    path = tmp_path / "m.jsonl"
    write_lines(path, [record(0, style="surprise"), record(1, style="excited")])
    corpus = load_manifest(path, corpus_kind="external")
    assert corpus.utterances[0].style_label is None
    assert corpus.utterances[1].style_label == StyleLabel.HAPPY


def test_label_counts_reproduce_published_split(tmp_path):
    """A manifest with the reference TTS-corpus train-row counts reports them back."""
    counts = {"rushed": 1145, "soft": 1814, "neutral": 4481, "happy": 885, "angry": 140, "sad": 35}
    path = tmp_path / "m.jsonl"
    lines = []
    i = 0
    for style, n in counts.items():
        for _ in range(n):
            lines.append(record(i, style=style))
            i += 1
    write_lines(path, lines)
    corpus = load_manifest(path)
    assert corpus.label_counts("train") == [1145, 1814, 4481, 885, 140, 35]
    assert corpus.label_counts("train")[int(StyleLabel.NEUTRAL)] == 4481


def test_save_round_trip(tmp_path, small_corpus):
    path = tmp_path / "round.jsonl"
    save_manifest(path, small_corpus)
    again = load_manifest(path)
    assert len(again) == len(small_corpus)
    assert [u.id for u in again] == [u.id for u in small_corpus]
    assert [u.style_label for u in again] == [u.style_label for u in small_corpus]


def test_missing_file():
    with pytest.raises(ManifestError, match="not found"):
        load_manifest("/nonexistent/manifest.jsonl")
