"""Classification metrics: confusion matrix, unweighted and weighted accuracy.

Weighted accuracy is the class-weight-weighted mean of per-class recalls,
restricted to classes present in the evaluated corpus.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from ..corpus.labels import NUM_STYLES
from .data import Example, collate
from .weights import ClassWeights


@dataclass(frozen=True)
class Metrics:
    unweighted_acc: float
    weighted_acc: float
    per_class_recall: np.ndarray  # NaN marks classes absent from the corpus
    confusion: np.ndarray         # 6x6 counts, rows = true class, cols = predicted

    def as_dict(self) -> dict:
        return {
            "unweighted_acc": self.unweighted_acc,
            "weighted_acc": self.weighted_acc,
            "per_class_recall": [None if np.isnan(r) else float(r) for r in self.per_class_recall],
            "confusion": self.confusion.tolist(),
        }


def metrics_from_confusion(confusion: np.ndarray, weights: ClassWeights) -> Metrics:
    confusion = np.asarray(confusion)
    if confusion.shape != (NUM_STYLES, NUM_STYLES):
        raise ValueError(f"confusion must be {NUM_STYLES}x{NUM_STYLES}")
    total = confusion.sum()
    if total == 0:
        raise ValueError("empty confusion matrix")
    row_sums = confusion.sum(axis=1)
    present = row_sums > 0
    recall = np.full(NUM_STYLES, np.nan)
    recall[present] = np.diag(confusion)[present] / row_sums[present]
    unweighted = float(np.trace(confusion) / total)
    denom = weights.w[present].sum()
    weighted = float((weights.w[present] * recall[present]).sum() / denom) if denom > 0 else 0.0
    return Metrics(
        unweighted_acc=unweighted,
        weighted_acc=weighted,
        per_class_recall=recall,
        confusion=confusion,
    )


@torch.no_grad()
def predict_labels(model, examples: list[Example], batch_size: int = 64) -> np.ndarray:
    """Argmax class indices in corpus order (inference mode)."""
    was_training = model.training
    model.eval()
    try:
        preds = []
        for start in range(0, len(examples), batch_size):
            batch = collate(examples[start : start + batch_size])
            logits = model(batch.mfcc, batch.mfcc_lens, batch.prosody, batch.tokens, batch.token_lens)
            preds.append(logits.argmax(dim=1).numpy())
    finally:
        model.train(was_training)
    return np.concatenate(preds)


def evaluate(model, examples: list[Example], weights: ClassWeights, batch_size: int = 64) -> Metrics:
    """Metrics over a labeled example list."""
    if not examples:
        raise ValueError("cannot evaluate on an empty corpus")
    unlabeled = [e.id for e in examples if e.label is None]
    if unlabeled:
        raise ValueError(f"corpus has unlabeled utterances, e.g. {unlabeled[:3]}")
    preds = predict_labels(model, examples, batch_size)
    confusion = np.zeros((NUM_STYLES, NUM_STYLES), dtype=np.int64)
    for example, pred in zip(examples, preds):
        confusion[int(example.label), int(pred)] += 1
    return metrics_from_confusion(confusion, weights)
