import numpy as np
import pytest

from multistyle_tts.corpus.embeddings import (
    EMBEDDING_DIM,
    HashEmbeddingProvider,
    WordVectorProvider,
    embed_tokens,
    tokenize,
)


def test_shape():
    tokens, emb = embed_tokens("hello world", HashEmbeddingProvider())
    assert tokens == ["hello", "world"]
    assert emb.shape == (2, EMBEDDING_DIM)


def test_repeated_token_identical_rows():
    _, emb = embed_tokens("echo echo", HashEmbeddingProvider())
    assert np.array_equal(emb[0], emb[1])


def test_hash_vectors_reproducible_and_unit_norm():
    a = HashEmbeddingProvider().vector("zxqvverylikelyoov")
    b = HashEmbeddingProvider().vector("zxqvverylikelyoov")
    assert np.array_equal(a, b)
    assert abs(np.linalg.norm(a) - 1.0) < 1e-12


def test_empty_text_yields_empty_matrix():
    tokens, emb = embed_tokens("", HashEmbeddingProvider())
    assert tokens == [] and emb.shape == (0, EMBEDDING_DIM)


def test_tokenizer_strips_punctuation():
    assert tokenize("Hello, world! It's 2 a.m.") == ["hello", "world", "it's", "2", "a", "m"]


def test_word_vector_file(tmp_path):
    path = tmp_path / "vecs.txt"
    vec = " ".join(str(i / 1000.0) for i in range(EMBEDDING_DIM))
    path.write_text(f"hello {vec}\n")
    provider = WordVectorProvider(path)
    assert provider.vector("hello")[1] == 0.001
    # OOV falls back to the deterministic hash vector
    oov = provider.vector("zzznope")
    assert abs(np.linalg.norm(oov) - 1.0) < 1e-12


def test_word_vector_file_bad_width(tmp_path):
    path = tmp_path / "vecs.txt"
    path.write_text("hello 1.0 2.0\n")
    with pytest.raises(ValueError, match="300"):
        WordVectorProvider(path)


def test_missing_vector_file():
    with pytest.raises(FileNotFoundError):
        WordVectorProvider("/nonexistent/vectors.txt")
