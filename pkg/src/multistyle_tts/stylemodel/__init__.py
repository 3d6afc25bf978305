from .embedding import StyleEmbedding
from .network import ClassifierConfig, StyleClassifier, build_classifier
from .weights import ClassWeights, class_weights
from .metrics import Metrics, evaluate, metrics_from_confusion
from .data import Example, corpus_examples, collate
from .training import TrainConfig, EpochStats, train, weighted_cross_entropy, save_history
from .adabn import adapt_bn, adapt_bn_from_activations, pre_bn_activations
from .labeling import label_corpus, load_embedding_file
from .checkpoint import save_classifier, load_classifier

__all__ = [
    "StyleEmbedding",
    "ClassifierConfig",
    "StyleClassifier",
    "build_classifier",
    "ClassWeights",
    "class_weights",
    "Metrics",
    "evaluate",
    "metrics_from_confusion",
    "Example",
    "corpus_examples",
    "collate",
    "TrainConfig",
    "EpochStats",
    "train",
    "weighted_cross_entropy",
    "save_history",
    "adapt_bn",
    "adapt_bn_from_activations",
    "pre_bn_activations",
    "label_corpus",
    "load_embedding_file",
    "save_classifier",
    "load_classifier",
]
