import numpy as np
import pytest

from multistyle_tts.corpus.labels import NUM_STYLES, StyleLabel
from multistyle_tts.stylemodel import ClassWeights, class_weights, metrics_from_confusion
from multistyle_tts.stylemodel.metrics import evaluate


def brute_force_metrics(confusion, w):
    """Loop-based re-derivation of both accuracy variants."""
    total = confusion.sum()
    correct = sum(confusion[i][i] for i in range(NUM_STYLES))
    unweighted = correct / total
    num = den = 0.0
    for c in range(NUM_STYLES):
        row = confusion[c].sum()
        if row == 0:
            continue
        num += w[c] * (confusion[c][c] / row)
        den += w[c]
    return unweighted, (num / den if den else 0.0)


def test_perfect_predictions():
    confusion = np.diag([5, 4, 10, 2, 1, 3])
    m = metrics_from_confusion(confusion, ClassWeights(np.ones(6)))
    assert m.unweighted_acc == 1.0
    assert m.weighted_acc == 1.0


def test_two_class_hand_example():
    """neutral 75 at recall 0.8, happy 25 at recall 0.6; cap makes both w=4."""
    confusion = np.zeros((6, 6), dtype=int)
    confusion[StyleLabel.NEUTRAL, StyleLabel.NEUTRAL] = 60
    confusion[StyleLabel.NEUTRAL, StyleLabel.HAPPY] = 15
    confusion[StyleLabel.HAPPY, StyleLabel.HAPPY] = 15
    confusion[StyleLabel.HAPPY, StyleLabel.NEUTRAL] = 10
    weights = class_weights([0, 0, 75, 25, 0, 0])
    m = metrics_from_confusion(confusion, weights)
    assert m.unweighted_acc == pytest.approx(0.75)
    assert m.weighted_acc == pytest.approx(0.70)
    assert np.isnan(m.per_class_recall[StyleLabel.SAD])


def test_matches_brute_force_on_random_confusions():
    rng = np.random.default_rng(7)
    for _ in range(300):
        confusion = rng.integers(0, 40, size=(6, 6))
        if confusion.sum() == 0:
            continue
        w = rng.uniform(0, 10, size=6)
        m = metrics_from_confusion(confusion, ClassWeights(w))
        bu, bw = brute_force_metrics(confusion, w)
        assert m.unweighted_acc == bu
        assert m.weighted_acc == bw


def test_empty_confusion_rejected():
    with pytest.raises(ValueError):
        metrics_from_confusion(np.zeros((6, 6), dtype=int), ClassWeights(np.ones(6)))


def test_evaluate_requires_labels(small_examples):
    train, _ = small_examples
    unlabeled = [e for e in train][:3]
    for e in unlabeled:
        e = e  # copy not needed; construct one unlabeled
    from multistyle_tts.stylemodel import ClassifierConfig, build_classifier
    from multistyle_tts.stylemodel.data import Example

    model = build_classifier(ClassifierConfig(audio_hidden=8, text_hidden=8, audio_out=8))
    bad = [
        Example(id="x", corpus_id="c", mfcc=np.zeros((4, 39)), prosody=np.zeros(35), tokens=np.zeros((1, 300)), label=None)
    ]
    with pytest.raises(ValueError, match="unlabeled"):
        evaluate(model, bad, ClassWeights(np.ones(6)))
    with pytest.raises(ValueError, match="empty"):
        evaluate(model, [], ClassWeights(np.ones(6)))
