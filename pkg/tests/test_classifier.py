import math

import numpy as np
import pytest
import torch

from conftest import random_example
from multistyle_tts.stylemodel import (
    ClassifierConfig,
    ClassWeights,
    StyleEmbedding,
    build_classifier,
    collate,
    load_classifier,
    save_classifier,
    weighted_cross_entropy,
)

SMALL = ClassifierConfig(audio_hidden=16, text_hidden=16, audio_out=16, seed=3)


def batch_of(n, seed=0):
    rng = np.random.default_rng(seed)
    return collate([random_example(rng) for _ in range(n)])


def test_softmax_output_on_simplex():
    model = build_classifier(SMALL)
    b = batch_of(16)
    probs = model.embed_batch(b.mfcc, b.mfcc_lens, b.prosody, b.tokens, b.token_lens)
    assert probs.shape == (16, 6)
    assert (probs >= 0).all()
    assert np.abs(probs.sum(axis=1) - 1.0).max() < 1e-6


def test_inference_deterministic():
    model = build_classifier(SMALL)
    b = batch_of(4, seed=1)
    p1 = model.embed_batch(b.mfcc, b.mfcc_lens, b.prosody, b.tokens, b.token_lens)
    p2 = model.embed_batch(b.mfcc, b.mfcc_lens, b.prosody, b.tokens, b.token_lens)
    assert np.array_equal(p1, p2)


def test_shape_mismatch_rejected():
    model = build_classifier(SMALL)
    b = batch_of(2)
    with pytest.raises(ValueError, match="mfcc"):
        model(b.mfcc[:, :, :38], b.mfcc_lens, b.prosody, b.tokens, b.token_lens)
    with pytest.raises(ValueError, match="prosody"):
        model(b.mfcc, b.mfcc_lens, b.prosody[:, :34], b.tokens, b.token_lens)


def test_same_seed_same_init():
    a = build_classifier(SMALL)
    b = build_classifier(SMALL)
    for (_, pa), (_, pb) in zip(a.state_dict().items(), b.state_dict().items()):
        assert torch.equal(pa, pb)


def test_checkpoint_round_trip_bit_exact(tmp_path):
    model = build_classifier(SMALL)
    path = tmp_path / "clf.pt"
    save_classifier(path, model)
    loaded = load_classifier(path)
    assert loaded.config == model.config
    for (na, a), (_, b) in zip(model.state_dict().items(), loaded.state_dict().items()):
        assert torch.equal(a, b), na


def test_loss_perfect_confidence():
    logits = torch.zeros(1, 6)
    logits[0, 2] = 1e6
    loss = weighted_cross_entropy(logits, torch.tensor([2]), ClassWeights(np.ones(6)))
    assert loss.item() < 1e-6


def test_loss_uniform_logits_ln6():
    loss = weighted_cross_entropy(torch.zeros(5, 6), torch.tensor([0, 1, 2, 3, 4]), ClassWeights(np.ones(6)))
    assert abs(loss.item() - math.log(6)) < 1e-6


def test_loss_linear_in_weight():
    torch.manual_seed(0)
    logits = torch.randn(1, 6)
    labels = torch.tensor([3])
    w1 = np.ones(6)
    w2 = w1.copy()
    w2[3] = 2.0
    l1 = weighted_cross_entropy(logits, labels, ClassWeights(w1))
    l2 = weighted_cross_entropy(logits, labels, ClassWeights(w2))
    assert abs(l2.item() - 2 * l1.item()) < 1e-6


def test_loss_rejects_zero_weight_label():
    w = np.ones(6)
    w[1] = 0.0
    with pytest.raises(ValueError, match="zero class weight"):
        weighted_cross_entropy(torch.zeros(2, 6), torch.tensor([0, 1]), ClassWeights(w))


def test_style_embedding_validation():
    StyleEmbedding(np.array([0.01, 0.01, 0.95, 0.01, 0.01, 0.01]))
    with pytest.raises(ValueError, match="sum"):
        StyleEmbedding(np.array([0.5, 0.1, 0.1, 0.1, 0.1, 0.05]))
    with pytest.raises(ValueError, match="nonnegative"):
        StyleEmbedding(np.array([1.2, -0.2, 0, 0, 0, 0]))
    with pytest.raises(ValueError, match="6"):
        StyleEmbedding(np.array([1.0]))
