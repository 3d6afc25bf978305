import numpy as np
import pytest
import torch

from multistyle_tts.corpus.embeddings import HashEmbeddingProvider
from multistyle_tts.corpus.features import FeatureConfig
from multistyle_tts.corpus.normalize import fit_normalizer
from multistyle_tts.corpus.synthetic import generate_synthetic_corpus
from multistyle_tts.stylemodel.data import corpus_examples, utterance_bundle

torch.set_num_threads(1)


@pytest.fixture(scope="session")
def fconfig():
    return FeatureConfig()


@pytest.fixture(scope="session")
def provider():
    return HashEmbeddingProvider()


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    """30-utterance synthetic corpus (3 train / 2 dev per class)."""
    root = tmp_path_factory.mktemp("small_corpus")
    return generate_synthetic_corpus(root, n_train=3, n_dev=2, seed=11)


@pytest.fixture(scope="session")
def small_stats(small_corpus, fconfig, provider):
    bundles = [utterance_bundle(u, fconfig, provider) for u in small_corpus.split("train")]
    return fit_normalizer(bundles, small_corpus.corpus_id)


@pytest.fixture(scope="session")
def small_examples(small_corpus, small_stats, fconfig, provider):
    train, _ = corpus_examples(small_corpus, fconfig, provider, stats=small_stats, split="train")
    dev, _ = corpus_examples(small_corpus, fconfig, provider, stats=small_stats, split="dev")
    return train, dev


def random_example(rng: np.random.Generator, label: int | None = 0):
    """A synthetic classifier example with random features."""
    from multistyle_tts.stylemodel.data import Example

    return Example(
        id=f"rand-{rng.integers(1 << 30)}",
        corpus_id="rand",
        mfcc=rng.standard_normal((int(rng.integers(4, 25)), 39)),
        prosody=rng.standard_normal(35),
        tokens=rng.standard_normal((int(rng.integers(1, 7)), 300)),
        label=label,
    )
