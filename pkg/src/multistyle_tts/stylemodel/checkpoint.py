"""Single-file, versioned classifier checkpoints."""

from __future__ import annotations

from dataclasses import asdict
from pathlib import Path

import torch

from .network import ClassifierConfig, StyleClassifier

CHECKPOINT_VERSION = 1


def save_classifier(path: str | Path, model: StyleClassifier) -> None:
    torch.save(
        {
            "version": CHECKPOINT_VERSION,
            "kind": "style_classifier",
            "config": asdict(model.config),
            "state": model.state_dict(),
        },
        str(path),
    )


def load_classifier(path: str | Path) -> StyleClassifier:
    payload = torch.load(str(path), map_location="cpu", weights_only=False)
    if payload.get("kind") != "style_classifier":
        raise ValueError(f"{path}: not a style classifier checkpoint")
    if payload.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"{path}: unsupported checkpoint version {payload.get('version')}")
    model = StyleClassifier(ClassifierConfig(**payload["config"]))
    model.load_state_dict(payload["state"])
    model.eval()
    return model
