import numpy as np
import pytest

from multistyle_tts.corpus.labels import NUM_STYLES, StyleLabel
from multistyle_tts.stylemodel.weights import ClassWeights, class_weights


def brute_force_weights(counts, cap=0.25):
    """Independent re-derivation: prior per class, neutral capped, inverted."""
    counts = [float(c) for c in counts]
    total = sum(counts)
    out = []
    for i, c in enumerate(counts):
        if c == 0:
            out.append(0.0)
            continue
        prior = c / total
        if i == int(StyleLabel.NEUTRAL):
            prior = min(prior, cap)
        out.append(1.0 / prior)
    return np.array(out)


def test_reference_train_counts():
    """Counts from the published TTS-corpus train split."""
    cw = class_weights([1145, 1814, 4481, 885, 140, 35])
    assert cw[StyleLabel.NEUTRAL] == 4.0  # prior 0.527 capped at 0.25
    assert abs(cw[StyleLabel.RUSHED] - 8500 / 1145) < 1e-9
    assert abs(cw[StyleLabel.SAD] - 8500 / 35) < 1e-9


def test_uniform_counts():
    cw = class_weights([7] * 6)
    assert np.allclose(cw.w, 6.0)


def test_single_class_with_zeros():
    cw = class_weights([0, 0, 10, 0, 0, 0])
    assert np.array_equal(cw.w, [0, 0, 4.0, 0, 0, 0])


def test_all_zero_rejected():
    with pytest.raises(ValueError):
        class_weights([0] * 6)
    with pytest.raises(ValueError):
        class_weights([0, -1, 2, 0, 0, 0])


def test_matches_brute_force_on_random_counts():
    rng = np.random.default_rng(42)
    for _ in range(300):
        counts = rng.integers(0, 5000, size=NUM_STYLES)
        if counts.sum() == 0:
            continue
        assert np.array_equal(class_weights(counts).w, brute_force_weights(counts))


def test_weights_validation():
    with pytest.raises(ValueError):
        ClassWeights(np.array([-1.0, 0, 0, 0, 0, 0]))
    with pytest.raises(ValueError):
        ClassWeights(np.zeros(5))
