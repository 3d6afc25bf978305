"""Service configuration: JSON file plus environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional


@dataclass
class ServiceConfig:
    data_dir: str = "service_data"        # sessions + answer logs
    media_dir: str = "service_data/media"  # WAV stimuli, served under /media/
    pool_dir: str = "service_data/pool"    # pre-built test item files
    classifier_path: Optional[str] = None
    norm_stats_path: Optional[str] = None
    prosody_path: Optional[str] = None
    acoustic_path: Optional[str] = None
    neural_vocoder_path: Optional[str] = None
    vocoder: str = "dsp"
    sample_rate: int = 24000
    host: str = "127.0.0.1"
    port: int = 8000

    _ENV_PREFIX = "MSTTS_"

    @classmethod
    def load(cls, path: str | Path | None = None, env: Optional[dict] = None) -> "ServiceConfig":
        """Read the JSON config file (if given), then apply MSTTS_* env overrides."""
        values: dict = {}
        if path is not None:
            values.update(json.loads(Path(path).read_text()))
        env = env if env is not None else dict(os.environ)
        for f in fields(cls):
            if f.name.startswith("_"):
                continue
            key = cls._ENV_PREFIX + f.name.upper()
            if key in env:
                raw = env[key]
                values[f.name] = int(raw) if f.type == "int" else raw
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**values)
