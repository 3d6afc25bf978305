from ..f0 import analyze_f0, estimate_f0, voiced_mean
from .frontend import LinguisticSequence, Lexicon, text_to_linguistic, default_lexicon, PHONEME_INVENTORY
from .prosody_model import ProsodyConfig, ProsodyModel, ProsodyTrack, build_prosody_model, predict_prosody
from .acoustic_model import (
    AcousticConfig,
    AcousticFrames,
    AcousticModel,
    build_acoustic_model,
    predict_acoustic,
    upsample_linguistic,
)
from .training import TtsTrainConfig, train_tts, extract_tts_targets
from .dsp_vocoder import vocode_dsp
from .neural_vocoder import (
    NeuralVocoderConfig,
    NeuralVocoder,
    build_neural_vocoder,
    mu_law_encode,
    mu_law_decode,
    train_neural_vocoder,
    vocode_neural,
)
from .checkpoint import save_tts_model, load_tts_model

__all__ = [
    "analyze_f0",
    "estimate_f0",
    "voiced_mean",
    "LinguisticSequence",
    "Lexicon",
    "text_to_linguistic",
    "default_lexicon",
    "PHONEME_INVENTORY",
    "ProsodyConfig",
    "ProsodyModel",
    "ProsodyTrack",
    "build_prosody_model",
    "predict_prosody",
    "AcousticConfig",
    "AcousticFrames",
    "AcousticModel",
    "build_acoustic_model",
    "predict_acoustic",
    "upsample_linguistic",
    "TtsTrainConfig",
    "train_tts",
    "extract_tts_targets",
    "vocode_dsp",
    "NeuralVocoderConfig",
    "NeuralVocoder",
    "build_neural_vocoder",
    "mu_law_encode",
    "mu_law_decode",
    "train_neural_vocoder",
    "vocode_neural",
    "save_tts_model",
    "load_tts_model",
]
