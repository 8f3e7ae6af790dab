"""Dense sentence embeddings with an exact binary container format.

A corpus lives in two files:

* the embedding file: magic ``CODEMB1\\0`` (8 bytes), row count and
  dimensionality as little-endian uint32, then ``count * dim``
  little-endian IEEE-754 float32 values, row-major;
* a sidecar with the same path but extension ``.txt``: UTF-8, one
  sentence per line (LF), line i aligned with row i.

Storage precision is 32-bit; all arithmetic in this package widens to
float64 before accumulating, which keeps dot products on long vectors
well conditioned.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import AlignmentError, FormatError

MAGIC = b"CODEMB1\x00"
_HEADER = struct.Struct("<8sII")


def sidecar_path(path: str | Path) -> Path:
    """Sentence sidecar for an embedding file: same path, ``.txt`` extension."""
    return Path(path).with_suffix(".txt")


@dataclass
class EmbeddingMatrix:
    """Row-aligned embedding vectors and the sentences they encode.

    ``vectors`` is held as float32 (the storage precision); treat
    instances as immutable after construction.
    """

    vectors: np.ndarray
    sentences: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.vectors = np.ascontiguousarray(self.vectors, dtype=np.float32)
        if self.vectors.ndim != 2:
            raise ValueError(f"vectors must be 2-D, got shape {self.vectors.shape}")
        if self.vectors.shape[1] < 1:
            raise ValueError("embedding dimensionality must be >= 1")
        self.sentences = list(self.sentences)
        if len(self.sentences) != self.vectors.shape[0]:
            raise ValueError(
                f"{len(self.sentences)} sentences for {self.vectors.shape[0]} rows"
            )
        if self.count:
            if not np.isfinite(self.vectors).all():
                bad = int(np.where(~np.isfinite(self.vectors).all(axis=1))[0][0])
                raise ValueError(f"row {bad} contains non-finite values")
            dead = np.where(~self.vectors.any(axis=1))[0]
            if dead.size:
                raise ValueError(
                    f"row {int(dead[0])} is the all-zero vector; cosine is undefined"
                )

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def row(self, i: int) -> np.ndarray:
        """Row i widened to float64."""
        return self.vectors[i].astype(np.float64)


def save_embeddings(matrix: EmbeddingMatrix, path: str | Path) -> None:
    """Write the binary container and its sentence sidecar."""
    path = Path(path)
    if path.suffix == ".txt":
        raise ValueError("embedding path must not end in .txt (reserved for the sidecar)")
    for i, sentence in enumerate(matrix.sentences):
        if "\n" in sentence or "\r" in sentence:
            raise ValueError(f"sentence {i} contains a line break")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, matrix.count, matrix.dim))
        fh.write(np.ascontiguousarray(matrix.vectors, dtype="<f4").tobytes())
    text = "\n".join(matrix.sentences)
    if matrix.count:
        text += "\n"
    sidecar_path(path).write_text(text, encoding="utf-8")


def load_embeddings(path: str | Path) -> EmbeddingMatrix:
    """Read an embedding file and its sidecar back into memory.

    Raises FormatError for a bad magic or truncated payload,
    AlignmentError when the sidecar line count disagrees with the
    header, and ValueError for rows that violate matrix invariants.
    """
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: shorter than the {_HEADER.size}-byte header")
    magic, count, dim = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if dim < 1:
        raise FormatError(f"{path}: header dimensionality {dim} is invalid")
    expected = _HEADER.size + 4 * count * dim
    if len(raw) != expected:
        raise FormatError(f"{path}: expected {expected} bytes, found {len(raw)}")
    vectors = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(count, dim)

    side = sidecar_path(path)
    text = side.read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != count:
        raise AlignmentError(
            f"{side}: {len(lines)} sentences for {count} embedding rows"
        )
    return EmbeddingMatrix(vectors=vectors.copy(), sentences=lines)


def cosine_similarity(u, v) -> float:
    """cos(u, v) = u.v / (|u| |v|), accumulated in float64, clamped to [-1, 1].

    Cosine *distance* anywhere in this package means ``1 - cosine_similarity``.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 1 or v.ndim != 1 or u.shape != v.shape:
        raise ValueError(f"vectors must be 1-D and equal length, got {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine is undefined for all-zero vectors")
    return float(np.clip(float(u @ v) / (nu * nv), -1.0, 1.0))


def cosine_distance(u, v) -> float:
    return 1.0 - cosine_similarity(u, v)
