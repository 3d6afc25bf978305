"""Versioned single-file checkpoints for the TTS models."""

from __future__ import annotations

from dataclasses import asdict
from pathlib import Path

import torch

from .acoustic_model import AcousticConfig, AcousticModel
from .neural_vocoder import NeuralVocoder, NeuralVocoderConfig
from .prosody_model import ProsodyConfig, ProsodyModel

CHECKPOINT_VERSION = 1

_KINDS = {
    "prosody": (ProsodyConfig, ProsodyModel),
    "acoustic": (AcousticConfig, AcousticModel),
    "neural_vocoder": (NeuralVocoderConfig, NeuralVocoder),
}
_CLASS_TO_KIND = {ProsodyModel: "prosody", AcousticModel: "acoustic", NeuralVocoder: "neural_vocoder"}


def save_tts_model(path: str | Path, model) -> None:
    kind = _CLASS_TO_KIND.get(type(model))
    if kind is None:
        raise ValueError(f"not a known TTS model: {type(model).__name__}")
    torch.save(
        {
            "version": CHECKPOINT_VERSION,
            "kind": kind,
            "config": asdict(model.config),
            "state": model.state_dict(),
            "trained": bool(model.trained),
        },
        str(path),
    )


def load_tts_model(path: str | Path):
    payload = torch.load(str(path), map_location="cpu", weights_only=False)
    kind = payload.get("kind")
    if kind not in _KINDS:
        raise ValueError(f"{path}: unknown TTS checkpoint kind {kind!r}")
    if payload.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"{path}: unsupported checkpoint version {payload.get('version')}")
    config_cls, model_cls = _KINDS[kind]
    model = model_cls(config_cls(**payload["config"]))
    model.load_state_dict(payload["state"])
    model.trained = payload.get("trained", False)
    model.eval()
    return model
