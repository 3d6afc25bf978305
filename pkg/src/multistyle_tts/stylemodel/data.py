"""Bridging corpora to classifier tensors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
import torch

from ..audio import read_wav
from ..corpus.embeddings import EmbeddingProvider, embed_tokens
from ..corpus.features import FeatureBundle, FeatureConfig, extract_mfcc, extract_prosody
from ..corpus.manifest import Corpus, Utterance
from ..corpus.normalize import NormalizationMode, NormStats, apply_normalizer


@dataclass
class Example:
    id: str
    corpus_id: str
    mfcc: np.ndarray        # T x 39
    prosody: np.ndarray     # 35
    tokens: np.ndarray      # L x 300
    label: Optional[int]


class Batch(NamedTuple):
    mfcc: torch.Tensor
    mfcc_lens: torch.Tensor
    prosody: torch.Tensor
    tokens: torch.Tensor
    token_lens: torch.Tensor
    labels: Optional[torch.Tensor]


def utterance_bundle(utt: Utterance, fconfig: FeatureConfig, provider: EmbeddingProvider) -> FeatureBundle:
    wav = read_wav(utt.audio_ref)
    tokens, emb = embed_tokens(utt.text, provider)
    bundle = FeatureBundle(
        mfcc=extract_mfcc(wav, fconfig),
        prosody=extract_prosody(wav, fconfig),
        tokens=tokens,
        token_embeddings=emb,
    )
    bundle.validate()
    return bundle


def corpus_examples(
    corpus: Corpus,
    fconfig: FeatureConfig,
    provider: EmbeddingProvider,
    stats: Optional[NormStats] = None,
    mode: NormalizationMode = NormalizationMode.BOTH,
    split: Optional[str] = None,
    skip_errors: bool = False,
) -> tuple[list[Example], list[tuple[str, str]]]:
    """Extract (optionally normalized) examples; returns (examples, skipped).

    With skip_errors, utterances whose audio cannot be read or featurized are
    skipped and reported rather than aborting the run.
    """
    utts = corpus.utterances if split is None else corpus.split(split)
    examples: list[Example] = []
    skipped: list[tuple[str, str]] = []
    for utt in utts:
        try:
            bundle = utterance_bundle(utt, fconfig, provider)
        except Exception as exc:
            if not skip_errors:
                raise
            skipped.append((utt.id, str(exc)))
            continue
        if stats is not None:
            bundle = apply_normalizer(bundle, stats, mode)
        examples.append(
            Example(
                id=utt.id,
                corpus_id=utt.corpus_id,
                mfcc=bundle.mfcc,
                prosody=bundle.prosody,
                tokens=bundle.token_embeddings,
                label=None if utt.style_label is None else int(utt.style_label),
            )
        )
    return examples, skipped


def collate(examples: list[Example]) -> Batch:
    """Pad variable-length sequences into batch tensors.

    Empty token sequences are padded with a single zero row so the text
    encoder always has at least one step.
    """
    if not examples:
        raise ValueError("empty batch")
    mfcc_lens = [max(1, len(e.mfcc)) for e in examples]
    token_lens = [max(1, len(e.tokens)) for e in examples]
    t_max, l_max = max(mfcc_lens), max(token_lens)
    mfcc_dim = examples[0].mfcc.shape[1]
    token_dim = examples[0].tokens.shape[1] if examples[0].tokens.ndim == 2 else 300
    mfcc = torch.zeros(len(examples), t_max, mfcc_dim)
    tokens = torch.zeros(len(examples), l_max, token_dim)
    for i, e in enumerate(examples):
        mfcc[i, : len(e.mfcc)] = torch.from_numpy(np.ascontiguousarray(e.mfcc)).float()
        if len(e.tokens):
            tokens[i, : len(e.tokens)] = torch.from_numpy(np.ascontiguousarray(e.tokens)).float()
    prosody = torch.from_numpy(np.stack([e.prosody for e in examples])).float()
    labels = None
    if all(e.label is not None for e in examples):
        labels = torch.tensor([e.label for e in examples], dtype=torch.long)
    return Batch(
        mfcc=mfcc,
        mfcc_lens=torch.tensor(mfcc_lens, dtype=torch.long),
        prosody=prosody,
        tokens=tokens,
        token_lens=torch.tensor(token_lens, dtype=torch.long),
        labels=labels,
    )
