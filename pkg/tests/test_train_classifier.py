import numpy as np
import pytest

from multistyle_tts.stylemodel import (
    ClassifierConfig,
    TrainConfig,
    build_classifier,
    class_weights,
    evaluate,
    save_history,
    train,
)

SMALL = ClassifierConfig(audio_hidden=24, text_hidden=24, audio_out=24, seed=0)


def weights_for(examples):
    counts = np.zeros(6)
    for e in examples:
        counts[e.label] += 1
    return class_weights(counts)


def test_quick_overfit_on_small_corpus(small_examples):
    train_ex, dev_ex = small_examples
    w = weights_for(train_ex)
    model = build_classifier(SMALL)
    model, history = train(model, train_ex, dev_ex, w, TrainConfig(seed=0, max_epochs=40, patience=40))
    metrics = evaluate(model, train_ex, w)
    assert metrics.unweighted_acc >= 0.9
    assert history[-1].train_loss < history[0].train_loss


def test_deterministic_given_seed(small_examples):
    train_ex, dev_ex = small_examples
    w = weights_for(train_ex)
    runs = []
    for _ in range(2):
        model = build_classifier(SMALL)
        model, history = train(model, train_ex, dev_ex, w, TrainConfig(seed=7, max_epochs=4, patience=10))
        runs.append([(h.train_loss, h.dev_weighted_acc, h.dev_unweighted_acc) for h in history])
    assert runs[0] == runs[1]


def test_pooled_corpora_contract(small_examples):
    """Pooling two pre-normalized corpora just concatenates example lists."""
    train_ex, dev_ex = small_examples
    pooled = train_ex + [e for e in train_ex[:6]]
    w = weights_for(pooled)
    model = build_classifier(SMALL)
    model, history = train(model, pooled, dev_ex, w, TrainConfig(seed=0, max_epochs=2, patience=10))
    assert len(history) == 2


def test_empty_sets_rejected(small_examples):
    train_ex, dev_ex = small_examples
    w = weights_for(train_ex)
    model = build_classifier(SMALL)
    with pytest.raises(ValueError, match="train"):
        train(model, [], dev_ex, w, TrainConfig())
    with pytest.raises(ValueError, match="dev"):
        train(model, train_ex, [], w, TrainConfig())


def test_history_csv(tmp_path, small_examples):
    train_ex, dev_ex = small_examples
    w = weights_for(train_ex)
    model = build_classifier(SMALL)
    model, history = train(model, train_ex, dev_ex, w, TrainConfig(seed=0, max_epochs=2, patience=5))
    path = tmp_path / "history.csv"
    save_history(path, history)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "epoch,train_loss,dev_weighted_acc,dev_unweighted_acc"
    assert len(lines) == len(history) + 1
