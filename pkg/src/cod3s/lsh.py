"""Random-hyperplane hashing of embeddings into b-bit signatures.

Each signature bit is the sign of the dot product between the embedding
and one Gaussian normal vector: bit i is 1 iff ``normals[i] . v >= 0``
(a dot product of exactly zero maps to 1). The Hamming distance between
two signatures then approximates the angle between the underlying
vectors, so ``cos(pi * d / b)`` approximates their cosine similarity.

Hyperplanes are sampled with a Philox counter-based generator driven
through a Box-Muller transform (generator id 1). The sample stream is
position-indexed, so for a fixed (dim, seed) the b-bit family is a row
prefix of every wider family. Persisted hyperplane files are the source
of truth for reproducing signatures; the file layout is::

    magic "CODLSH1\\0" | bits u32 | dim u32 | seed u64 | generator u32
    | bits*dim float32, row-major, little-endian
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .embeddings import EmbeddingMatrix
from .errors import FormatError

MAGIC = b"CODLSH1\x00"
GENERATOR_PHILOX_BOX_MULLER = 1
_HEADER = struct.Struct("<8sIIQI")
_MAX_SEED = 2**64


@dataclass(frozen=True)
class Signature:
    """Packed b-bit code; bit i lives at byte i // 8, position i % 8.

    Pad bits beyond position ``bits - 1`` are always zero, so equal
    codes compare equal byte-for-byte. ``str()`` renders the external
    form: a length-b string over '0'/'1' with character i = bit i.
    """

    bits: int
    payload: bytes

    def __post_init__(self):
        if self.bits < 1:
            raise ValueError("a signature needs at least one bit")
        if len(self.payload) != (self.bits + 7) // 8:
            raise ValueError(
                f"payload of {len(self.payload)} bytes cannot hold {self.bits} bits"
            )
        pad = len(self.payload) * 8 - self.bits
        if pad and self.payload[-1] >> (8 - pad):
            raise ValueError("pad bits beyond the signature width must be zero")

    @classmethod
    def from_string(cls, text: str) -> "Signature":
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"signature text must be a nonempty '0'/'1' string: {text!r}")
        return cls.from_bools([c == "1" for c in text])

    @classmethod
    def from_bools(cls, flags) -> "Signature":
        arr = np.asarray(flags, dtype=np.uint8)
        payload = np.packbits(arr, bitorder="little").tobytes()
        return cls(bits=arr.size, payload=payload)

    def __str__(self) -> str:
        return "".join(
            "1" if self.payload[i >> 3] >> (i & 7) & 1 else "0" for i in range(self.bits)
        )

    def __int__(self) -> int:
        return int.from_bytes(self.payload, "little")


def hamming_distance(a: Signature, b: Signature) -> int:
    """Count of differing bit positions between two equal-width signatures."""
    if a.bits != b.bits:
        raise ValueError(f"signature widths differ: {a.bits} vs {b.bits}")
    return (int(a) ^ int(b)).bit_count()


def approx_cosine(d: int, bits: int) -> float:
    """Cosine similarity implied by Hamming distance d out of b bits: cos(pi d / b)."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    if not 0 <= d <= bits:
        raise ValueError(f"distance {d} outside [0, {bits}]")
    return math.cos(math.pi * (d / bits))


@dataclass
class HyperplaneSet:
    """b Gaussian normal vectors defining the hash family; immutable after creation."""

    normals: np.ndarray
    seed: int
    generator: int = GENERATOR_PHILOX_BOX_MULLER

    def __post_init__(self):
        self.normals = np.ascontiguousarray(self.normals, dtype=np.float32)
        if self.normals.ndim != 2 or self.normals.shape[0] < 1 or self.normals.shape[1] < 1:
            raise ValueError(f"normals must be a (bits, dim) matrix, got {self.normals.shape}")
        if not self.normals.any(axis=1).all():
            raise ValueError("a hyperplane normal is all-zero")

    @property
    def bits(self) -> int:
        return self.normals.shape[0]

    @property
    def dim(self) -> int:
        return self.normals.shape[1]


def generate_hyperplanes(dim: int, bits: int, seed: int) -> HyperplaneSet:
    """Sample a deterministic (dim, bits, seed) -> normals hash family.

    Uniform doubles come from Philox in position order and are paired
    through Box-Muller; sample i depends only on stream position, which
    is what gives the shared-prefix property across widths.
    """
    if dim < 1 or bits < 1:
        raise ValueError("dim and bits must be >= 1")
    if not 0 <= seed < _MAX_SEED:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    n = bits * dim
    pairs = np.random.Generator(np.random.Philox(seed)).random(((n + 1) // 2, 2))
    radius = np.sqrt(-2.0 * np.log1p(-pairs[:, 0]))  # log1p keeps u=0 safe
    theta = (2.0 * np.pi) * pairs[:, 1]
    samples = np.empty(pairs.shape[0] * 2)
    samples[0::2] = radius * np.cos(theta)
    samples[1::2] = radius * np.sin(theta)
    normals = samples[:n].reshape(bits, dim).astype(np.float32)
    return HyperplaneSet(normals=normals, seed=seed)


def save_hyperplanes(planes: HyperplaneSet, path: str | Path) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, planes.bits, planes.dim, planes.seed, planes.generator))
        fh.write(np.ascontiguousarray(planes.normals, dtype="<f4").tobytes())


def load_hyperplanes(path: str | Path) -> HyperplaneSet:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: shorter than the {_HEADER.size}-byte header")
    magic, bits, dim, seed, generator = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    expected = _HEADER.size + 4 * bits * dim
    if len(raw) != expected:
        raise FormatError(f"{path}: expected {expected} bytes, found {len(raw)}")
    normals = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(bits, dim)
    return HyperplaneSet(normals=normals.copy(), seed=seed, generator=generator)


def hash_vector(planes: HyperplaneSet, v) -> Signature:
    """Hash one embedding; bit i = 1 iff normals[i] . v >= 0."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size != planes.dim:
        raise ValueError(f"vector of length {v.size} against {planes.dim}-dim hyperplanes")
    if not v.any():
        raise ValueError("cannot hash the all-zero vector")
    dots = planes.normals.astype(np.float64) @ v
    return Signature.from_bools(dots >= 0.0)


def hash_corpus(planes: HyperplaneSet, matrix: EmbeddingMatrix) -> list[Signature]:
    """Hash every row of a corpus, preserving row order."""
    if matrix.dim != planes.dim:
        raise ValueError(f"matrix dim {matrix.dim} != hyperplane dim {planes.dim}")
    if matrix.count == 0:
        return []
    proj = matrix.vectors.astype(np.float64) @ planes.normals.astype(np.float64).T
    packed = np.packbits((proj >= 0.0).astype(np.uint8), axis=1, bitorder="little")
    return [Signature(bits=planes.bits, payload=row.tobytes()) for row in packed]
