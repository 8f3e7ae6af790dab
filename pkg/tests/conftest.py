import numpy as np
import pytest

from cod3s import EmbeddingMatrix

DATA = __import__("pathlib").Path(__file__).parent / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_matrix(rng, count, dim, word_bank=("red", "blue", "fox", "ran", "slept", "home")):
    """Random embedding corpus with synthetic sentences."""
    vectors = rng.normal(size=(count, dim))
    sentences = [
        " ".join(rng.choice(word_bank, size=rng.integers(2, 6)))
        for _ in range(count)
    ]
    return EmbeddingMatrix(vectors, sentences)


@pytest.fixture
def data_dir():
    return DATA
