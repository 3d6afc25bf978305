import json

import numpy as np
import pytest

from multistyle_tts.corpus.manifest import Corpus, Utterance
from multistyle_tts.stylemodel import (
    ClassifierConfig,
    build_classifier,
    label_corpus,
    load_embedding_file,
)

SMALL = ClassifierConfig(audio_hidden=12, text_hidden=12, audio_out=12, seed=1)


def test_one_record_per_utterance(tmp_path, small_corpus, small_stats, fconfig, provider):
    model = build_classifier(SMALL)
    out = tmp_path / "emb.jsonl"
    report = label_corpus(model, small_corpus, out, fconfig, provider, stats=small_stats)
    assert report.written == len(small_corpus)
    lines = [json.loads(l) for l in out.read_text().splitlines()]
    assert len(lines) == len(small_corpus)
    assert {l["id"] for l in lines} == {u.id for u in small_corpus}


def test_records_on_simplex(tmp_path, small_corpus, small_stats, fconfig, provider):
    model = build_classifier(SMALL)
    out = tmp_path / "emb.jsonl"
    label_corpus(model, small_corpus, out, fconfig, provider, stats=small_stats)
    table = load_embedding_file(out)
    for emb in table.values():
        assert abs(emb.p.sum() - 1.0) <= 1e-6
        assert (emb.p >= 0).all()


def test_unreadable_audio_skipped_not_fatal(tmp_path, small_corpus, small_stats, fconfig, provider):
    broken = Utterance(
        id="broken",
        audio_ref=tmp_path / "missing.wav",
        text="hello",
        speaker_id="spk0",
        style_label=None,
        corpus_id=small_corpus.corpus_id,
        split="train",
    )
    corpus = Corpus(
        corpus_id=small_corpus.corpus_id,
        kind="tts",
        utterances=list(small_corpus.utterances[:4]) + [broken],
    )
    model = build_classifier(SMALL)
    out = tmp_path / "emb.jsonl"
    report = label_corpus(model, corpus, out, fconfig, provider, stats=small_stats)
    assert report.written == 4
    assert len(report.skipped) == 1
    assert report.skipped[0][0] == "broken"
    assert len(out.read_text().splitlines()) == 4


def test_argmax_label_field(tmp_path, small_corpus, small_stats, fconfig, provider):
    model = build_classifier(SMALL)
    out = tmp_path / "emb.jsonl"
    label_corpus(model, small_corpus, out, fconfig, provider, stats=small_stats)
    for line in out.read_text().splitlines():
        rec = json.loads(line)
        emb = np.asarray(rec["embedding"])
        names = ["rushed", "soft", "neutral", "happy", "angry", "sad"]
        assert rec["argmax_label"] == names[int(emb.argmax())]
