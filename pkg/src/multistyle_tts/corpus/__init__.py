from .labels import StyleLabel, map_label
from .manifest import Corpus, ManifestError, Utterance, load_manifest, save_manifest
from .features import FeatureBundle, FeatureConfig, extract_mfcc, extract_prosody, PROSODY_DIM, MFCC_DIM
from .embeddings import HashEmbeddingProvider, WordVectorProvider, embed_tokens, tokenize, EMBEDDING_DIM
from .normalize import NormStats, NormalizationMode, fit_normalizer, apply_normalizer
from .synthetic import StyleAudioSpec, DEFAULT_STYLE_SPECS, generate_synthetic_corpus

__all__ = [
    "StyleLabel",
    "map_label",
    "Corpus",
    "ManifestError",
    "Utterance",
    "load_manifest",
    "save_manifest",
    "FeatureBundle",
    "FeatureConfig",
    "extract_mfcc",
    "extract_prosody",
    "PROSODY_DIM",
    "MFCC_DIM",
    "HashEmbeddingProvider",
    "WordVectorProvider",
    "embed_tokens",
    "tokenize",
    "EMBEDDING_DIM",
    "NormStats",
    "NormalizationMode",
    "fit_normalizer",
    "apply_normalizer",
    "StyleAudioSpec",
    "DEFAULT_STYLE_SPECS",
    "generate_synthetic_corpus",
]
