"""Sentence encoders behind one tiny interface.

``load_encoder`` resolves a name to an object with ``dim``, ``name``
and ``encode(sentences) -> float32 (n, dim)``. Real names go to
sentence-transformers (downloaded or cached checkpoints); names of the
form ``stub:<dim>`` give a deterministic hash-seeded encoder for tests
and offline runs.
"""

from __future__ import annotations

import hashlib

import numpy as np

# The released large RoBERTa sentence encoder tuned on NLI then STS.
DEFAULT_ENCODER = "sentence-transformers/roberta-large-nli-stsb-mean-tokens"


class StubEncoder:
    """Deterministic per-sentence Gaussian vectors; no semantics, just bytes.

    Each row is seeded from a blake2 digest of the text, so identical
    inputs encode identically across processes.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("stub dimensionality must be >= 1")
        self.dim = dim
        self.name = f"stub:{dim}"

    def encode(self, sentences: list[str]) -> np.ndarray:
        rows = np.empty((len(sentences), self.dim), dtype=np.float32)
        for i, sentence in enumerate(sentences):
            digest = hashlib.blake2b(sentence.encode("utf-8"), digest_size=8).digest()
            rng = np.random.default_rng(int.from_bytes(digest, "little"))
            rows[i] = rng.standard_normal(self.dim, dtype=np.float32)
        return rows


class TransformerEncoder:
    """sentence-transformers checkpoint in deterministic inference mode."""

    def __init__(self, name: str, batch_size: int = 32):
        from sentence_transformers import SentenceTransformer

        self._model = SentenceTransformer(name)
        self._batch_size = batch_size
        self.name = name
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def encode(self, sentences: list[str]) -> np.ndarray:
        if not sentences:
            return np.empty((0, self.dim), dtype=np.float32)
        vectors = self._model.encode(
            sentences,
            batch_size=self._batch_size,
            convert_to_numpy=True,
            normalize_embeddings=False,
            show_progress_bar=False,
        )
        return np.asarray(vectors, dtype=np.float32)


def load_encoder(name: str, batch_size: int = 32):
    if name.startswith("stub:"):
        return StubEncoder(int(name.split(":", 1)[1]))
    return TransformerEncoder(name, batch_size=batch_size)
