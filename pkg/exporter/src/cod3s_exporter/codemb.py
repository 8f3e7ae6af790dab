"""Writer for the toolkit's embedding container (format version CODEMB1).

The format is the contract between this exporter and the downstream
toolkit: magic ``CODEMB1\\0``, count and dim as little-endian uint32,
then count*dim little-endian float32 row-major, plus a ``.txt`` sidecar
holding one sentence per line. This module owns writing it; nothing
here imports the consumer.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"CODEMB1\x00"
_HEADER = struct.Struct("<8sII")


def sidecar_path(path: str | Path) -> Path:
    return Path(path).with_suffix(".txt")


def write_embeddings(vectors: np.ndarray, sentences: list[str], path: str | Path) -> None:
    """Write vectors (32-bit truncation, no normalization) and the sidecar.

    Rejects inputs the downstream loader would refuse: misaligned
    counts, line breaks inside sentences, non-finite or all-zero rows.
    """
    path = Path(path)
    if path.suffix == ".txt":
        raise ValueError("embedding path must not end in .txt (reserved for the sidecar)")
    vectors = np.ascontiguousarray(vectors, dtype="<f4")
    if vectors.ndim != 2 or vectors.shape[1] < 1:
        raise ValueError(f"need a (count, dim>=1) matrix, got shape {vectors.shape}")
    if vectors.shape[0] != len(sentences):
        raise ValueError(f"{len(sentences)} sentences for {vectors.shape[0]} rows")
    if vectors.shape[0]:
        if not np.isfinite(vectors).all():
            raise ValueError("encoder produced non-finite values")
        dead = np.where(~vectors.any(axis=1))[0]
        if dead.size:
            raise ValueError(f"row {int(dead[0])} is all-zero; the toolkit would reject it")
    for i, sentence in enumerate(sentences):
        if "\n" in sentence or "\r" in sentence:
            raise ValueError(f"sentence {i} contains a line break")

    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, vectors.shape[0], vectors.shape[1]))
        fh.write(vectors.tobytes())
    text = "\n".join(sentences)
    if sentences:
        text += "\n"
    sidecar_path(path).write_text(text, encoding="utf-8")
