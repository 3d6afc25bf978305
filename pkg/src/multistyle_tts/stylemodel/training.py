"""Classifier training: weighted softmax cross-entropy, early stopping on
dev weighted accuracy, per-epoch history."""

from __future__ import annotations

import copy
import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .data import Example, collate
from .metrics import evaluate
from .network import StyleClassifier
from .weights import ClassWeights


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 1e-3
    batch_size: int = 32
    max_epochs: int = 200
    patience: int = 20
    seed: int = 0


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    train_loss: float
    dev_weighted_acc: float
    dev_unweighted_acc: float


def weighted_cross_entropy(logits: torch.Tensor, labels: torch.Tensor, weights: ClassWeights) -> torch.Tensor:
    """Mean over the batch of w_label * (-log softmax(logits)[label]).

    The plain mean of weighted sample losses, not the weight-normalized mean.
    Samples whose class weight is 0 should have been filtered out upstream.
    """
    w = torch.from_numpy(weights.w).to(logits.dtype)
    sample_w = w[labels]
    if (sample_w == 0).any():
        bad = labels[sample_w == 0].tolist()
        raise ValueError(f"labels with zero class weight in batch: {sorted(set(bad))}")
    nll = torch.nn.functional.cross_entropy(logits, labels, reduction="none")
    return (sample_w * nll).mean()


def train(
    model: StyleClassifier,
    train_examples: list[Example],
    dev_examples: list[Example],
    weights: ClassWeights,
    config: TrainConfig = TrainConfig(),
) -> tuple[StyleClassifier, list[EpochStats]]:
    """Train in place and return (best-dev-checkpoint model, history).

    Callers pool pre-normalized examples from however many corpora they use;
    each corpus must already be normalized with its own stats. Deterministic
    for a fixed seed.
    """
    if not train_examples:
        raise ValueError("empty training set")
    if not dev_examples:
        raise ValueError("empty dev set")
    usable = [e for e in train_examples if e.label is not None and weights.w[e.label] > 0]
    if not usable:
        raise ValueError("no labeled training examples with positive class weight")

    torch.manual_seed(config.seed)
    rng = np.random.default_rng(config.seed)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.lr)

    history: list[EpochStats] = []
    best_state = copy.deepcopy(model.state_dict())
    best_acc = -1.0
    best_epoch = -1
    for epoch in range(config.max_epochs):
        model.train()
        order = rng.permutation(len(usable))
        losses = []
        for start in range(0, len(usable), config.batch_size):
            batch = collate([usable[i] for i in order[start : start + config.batch_size]])
            optimizer.zero_grad()
            logits = model(batch.mfcc, batch.mfcc_lens, batch.prosody, batch.tokens, batch.token_lens)
            loss = weighted_cross_entropy(logits, batch.labels, weights)
            loss.backward()
            optimizer.step()
            losses.append(loss.item())

        dev_metrics = evaluate(model, dev_examples, weights)
        history.append(
            EpochStats(
                epoch=epoch,
                train_loss=float(np.mean(losses)),
                dev_weighted_acc=dev_metrics.weighted_acc,
                dev_unweighted_acc=dev_metrics.unweighted_acc,
            )
        )
        if dev_metrics.weighted_acc > best_acc:
            best_acc = dev_metrics.weighted_acc
            best_state = copy.deepcopy(model.state_dict())
            best_epoch = epoch
        elif epoch - best_epoch >= config.patience:
            break

    model.load_state_dict(best_state)
    model.eval()
    return model, history


def save_history(path: str | Path, history: list[EpochStats]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["epoch", "train_loss", "dev_weighted_acc", "dev_unweighted_acc"])
        for h in history:
            writer.writerow([h.epoch, f"{h.train_loss:.6f}", f"{h.dev_weighted_acc:.6f}", f"{h.dev_unweighted_acc:.6f}"])
