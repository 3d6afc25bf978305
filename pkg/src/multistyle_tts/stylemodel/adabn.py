"""Adaptive batch normalization: swap the BN running statistics for the
statistics of a target corpus while freezing every learned weight."""

from __future__ import annotations

import copy

import numpy as np
import torch

from .data import Example, collate
from .network import StyleClassifier


@torch.no_grad()
def pre_bn_activations(model: StyleClassifier, examples: list[Example], batch_size: int = 64) -> np.ndarray:
    """Concatenated audio+text representations over a corpus, rows per utterance."""
    if not examples:
        raise ValueError("empty target corpus")
    was_training = model.training
    model.eval()
    try:
        chunks = []
        for start in range(0, len(examples), batch_size):
            batch = collate(examples[start : start + batch_size])
            acts = model.pre_bn(batch.mfcc, batch.mfcc_lens, batch.prosody, batch.tokens, batch.token_lens)
            chunks.append(acts.double().numpy())
    finally:
        model.train(was_training)
    return np.concatenate(chunks, axis=0)


def adapt_bn_from_activations(model: StyleClassifier, activations: np.ndarray) -> StyleClassifier:
    """New model whose BN running mean/var are the population statistics of
    `activations`; gamma, beta and all other parameters are untouched."""
    if activations.ndim != 2 or activations.shape[0] == 0:
        raise ValueError(f"activations must be a nonempty N x D matrix, got shape {activations.shape}")
    expected = model.bn.running_mean.shape[0]
    if activations.shape[1] != expected:
        raise ValueError(f"activation width {activations.shape[1]} != BN width {expected}")
    adapted = copy.deepcopy(model)
    mean = activations.mean(axis=0)
    var = activations.var(axis=0)  # population variance
    adapted.bn.running_mean.copy_(torch.from_numpy(mean).to(adapted.bn.running_mean.dtype))
    adapted.bn.running_var.copy_(torch.from_numpy(var).to(adapted.bn.running_var.dtype))
    adapted.eval()
    return adapted


def adapt_bn(model: StyleClassifier, target_examples: list[Example], batch_size: int = 64) -> StyleClassifier:
    """AdaBN over a target corpus (already normalized with its own corpus stats)."""
    acts = pre_bn_activations(model, target_examples, batch_size)
    return adapt_bn_from_activations(model, acts)
