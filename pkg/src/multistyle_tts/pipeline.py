"""Closed-loop orchestration: resolve a style embedding (named, mixed,
explicit, or extracted from a speech query) and drive synthesis with it."""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .audio import Waveform, read_wav
from .corpus.embeddings import EmbeddingProvider, HashEmbeddingProvider, embed_tokens
from .corpus.features import FeatureBundle, FeatureConfig, extract_mfcc, extract_prosody
from .corpus.labels import NUM_STYLES, StyleLabel, style_from_name
from .corpus.normalize import NormalizationMode, NormStats, apply_normalizer
from .stylemodel.data import Example, collate
from .stylemodel.embedding import StyleEmbedding
from .stylemodel.network import StyleClassifier
from .tts.acoustic_model import AcousticModel, predict_acoustic
from .tts.dsp_vocoder import vocode_dsp
from .tts.frontend import Lexicon, text_to_linguistic
from .tts.neural_vocoder import NeuralVocoder, vocode_neural
from .tts.prosody_model import ProsodyModel, predict_prosody

ONE_HOT_MAIN = 0.95
ONE_HOT_REST = 0.01


class SynthesisError(RuntimeError):
    """Failure in a named stage of the synthesis pipeline."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@contextmanager
def _stage(name: str):
    try:
        yield
    except SynthesisError:
        raise
    except Exception as exc:
        raise SynthesisError(name, exc) from exc


def make_style_embedding(style: StyleLabel | str) -> StyleEmbedding:
    """One-hot-style embedding: 0.95 on the selected style, 0.01 elsewhere."""
    if isinstance(style, str):
        style = style_from_name(style)
    p = np.full(NUM_STYLES, ONE_HOT_REST)
    p[int(style)] = ONE_HOT_MAIN
    return StyleEmbedding(p)


def mix_style_embedding(weights: dict[StyleLabel | str, float]) -> StyleEmbedding:
    """Hand-crafted soft embedding: nonnegative weights, normalized to sum 1."""
    p = np.zeros(NUM_STYLES)
    for style, w in weights.items():
        if isinstance(style, str):
            style = style_from_name(style)
        if w < 0:
            raise ValueError(f"negative weight for {style.name}: {w}")
        p[int(style)] += w
    total = p.sum()
    if total <= 0:
        raise ValueError("at least one style weight must be positive")
    return StyleEmbedding(p / total)


@dataclass
class StyleExtractor:
    """Classifier plus the query-domain feature/normalization configuration."""

    classifier: StyleClassifier
    stats: Optional[NormStats] = None
    mode: NormalizationMode = NormalizationMode.BOTH
    fconfig: FeatureConfig = field(default_factory=FeatureConfig)
    provider: EmbeddingProvider = field(default_factory=HashEmbeddingProvider)

    def extract(self, wav: Waveform, transcript: str) -> StyleEmbedding:
        tokens, emb = embed_tokens(transcript, self.provider)
        bundle = FeatureBundle(
            mfcc=extract_mfcc(wav, self.fconfig),
            prosody=extract_prosody(wav, self.fconfig),
            tokens=tokens,
            token_embeddings=emb,
        )
        if self.stats is not None:
            bundle = apply_normalizer(bundle, self.stats, self.mode)
        example = Example(
            id="query",
            corpus_id="query",
            mfcc=bundle.mfcc,
            prosody=bundle.prosody,
            tokens=bundle.token_embeddings,
            label=None,
        )
        batch = collate([example])
        return self.classifier.embed_one(
            batch.mfcc, batch.mfcc_lens, batch.prosody, batch.tokens, batch.token_lens
        )


def extract_query_style(extractor: StyleExtractor, query_audio: str | Path | Waveform, query_text: str) -> StyleEmbedding:
    """Featurize a query, normalize with the query-domain stats, run the classifier."""
    with _stage("query_style"):
        wav = query_audio if isinstance(query_audio, Waveform) else read_wav(query_audio)
        return extractor.extract(wav, query_text)


@dataclass
class TtsStack:
    """Everything synthesis needs, loaded once and shared read-only."""

    prosody: ProsodyModel
    acoustic: AcousticModel
    vocoder: str = "dsp"  # "dsp" or "neural"
    neural_vocoder: Optional[NeuralVocoder] = None
    lexicon: Optional[Lexicon] = None
    sample_rate: int = 24000
    dsp_seed: int = 0
    strict: bool = True


@dataclass(frozen=True)
class SynthesisRequest:
    """Exactly one style source: a named style, an explicit embedding, or a query."""

    text: str
    speaker: int = 0
    style_name: Optional[str] = None
    style_embedding: Optional[StyleEmbedding] = None
    query_audio: Optional[str | Path | Waveform] = None
    query_text: Optional[str] = None

    def style_sources(self) -> int:
        return sum(1 for s in (self.style_name, self.style_embedding, self.query_audio) if s is not None)


def resolve_style(request: SynthesisRequest, extractor: Optional[StyleExtractor] = None) -> StyleEmbedding:
    """Turn whichever style source the request carries into an embedding."""
    n = request.style_sources()
    if n != 1:
        raise ValueError(f"request must carry exactly one style source, got {n}")
    if request.style_name is not None:
        return make_style_embedding(request.style_name)
    if request.style_embedding is not None:
        return request.style_embedding
    if extractor is None:
        raise ValueError("query-style request needs a StyleExtractor")
    if request.query_text is None:
        raise ValueError("query-style request needs the query transcript")
    return extract_query_style(extractor, request.query_audio, request.query_text)


def synthesize(
    request: SynthesisRequest,
    stack: TtsStack,
    extractor: Optional[StyleExtractor] = None,
) -> tuple[Waveform, StyleEmbedding]:
    """frontend -> prosody -> acoustic -> vocoder; returns the waveform and
    the style embedding that conditioned it."""
    if not request.text or not request.text.strip():
        raise SynthesisError("frontend", ValueError("empty text"))
    style = resolve_style(request, extractor)
    with _stage("frontend"):
        ling = text_to_linguistic(request.text, stack.lexicon)
    with _stage("prosody"):
        track = predict_prosody(stack.prosody, ling, style, request.speaker, strict=stack.strict)
    with _stage("acoustic"):
        frames = predict_acoustic(stack.acoustic, ling, track, style, request.speaker, strict=stack.strict)
    with _stage("vocoder"):
        if stack.vocoder == "dsp":
            wav = vocode_dsp(frames, track.f0, rate=stack.sample_rate, seed=stack.dsp_seed)
        elif stack.vocoder == "neural":
            if stack.neural_vocoder is None:
                raise ValueError("neural vocoder selected but not loaded")
            wav = vocode_neural(stack.neural_vocoder, frames, track.f0)
        else:
            raise ValueError(f"unknown vocoder {stack.vocoder!r}")
    return wav, style


def respond(
    query_audio: str | Path | Waveform,
    query_text: str,
    response_text: str,
    stack: TtsStack,
    extractor: StyleExtractor,
    speaker: int = 0,
) -> tuple[Waveform, StyleEmbedding]:
    """Extract the query's style, then synthesize the response with it."""
    style = extract_query_style(extractor, query_audio, query_text)
    request = SynthesisRequest(text=response_text, speaker=speaker, style_embedding=style)
    wav, _ = synthesize(request, stack)
    return wav, style
