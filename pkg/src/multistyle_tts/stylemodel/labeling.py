"""Semi-supervised corpus labeling: run every utterance through the
classifier and persist its softmax embedding."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..corpus.embeddings import EmbeddingProvider
from ..corpus.features import FeatureConfig
from ..corpus.labels import StyleLabel
from ..corpus.manifest import Corpus
from ..corpus.normalize import NormalizationMode, NormStats
from .data import collate, corpus_examples
from .embedding import StyleEmbedding
from .network import StyleClassifier


@dataclass
class LabelingReport:
    written: int
    skipped: list[tuple[str, str]] = field(default_factory=list)


def label_corpus(
    model: StyleClassifier,
    corpus: Corpus,
    out_path: str | Path,
    fconfig: FeatureConfig,
    provider: EmbeddingProvider,
    stats: NormStats | None = None,
    mode: NormalizationMode = NormalizationMode.BOTH,
    batch_size: int = 64,
) -> LabelingReport:
    """Write one JSONL record {id, embedding[6], argmax_label} per utterance.

    Utterances whose audio cannot be read are skipped and reported; the run
    continues.
    """
    examples, skipped = corpus_examples(
        corpus, fconfig, provider, stats=stats, mode=mode, skip_errors=True
    )
    out_path = Path(out_path)
    written = 0
    with open(out_path, "w", encoding="utf-8") as f:
        for start in range(0, len(examples), batch_size):
            chunk = examples[start : start + batch_size]
            batch = collate(chunk)
            probs = model.embed_batch(batch.mfcc, batch.mfcc_lens, batch.prosody, batch.tokens, batch.token_lens)
            for example, row in zip(chunk, probs):
                emb = StyleEmbedding(row / row.sum())
                rec = {
                    "id": example.id,
                    "embedding": emb.tolist(),
                    "argmax_label": emb.argmax().name.lower(),
                }
                f.write(json.dumps(rec) + "\n")
                written += 1
    return LabelingReport(written=written, skipped=skipped)


def load_embedding_file(path: str | Path) -> dict[str, StyleEmbedding]:
    """Read a label file back into {utterance id: embedding}."""
    table: dict[str, StyleEmbedding] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            table[rec["id"]] = StyleEmbedding(np.asarray(rec["embedding"]))
    return table
