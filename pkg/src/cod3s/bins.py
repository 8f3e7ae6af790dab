"""Hamming-space bins over a hashed corpus.

Sentences sharing a signature form one bin; prefixes of the signature
define coarser ancestor bins, each added bit splitting a bin in two.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .embeddings import EmbeddingMatrix
from .errors import NotFoundError
from .lsh import Signature


@dataclass
class BinIndex:
    """Partition of corpus row indices by signature.

    Member lists preserve corpus order. ``bits`` is 0 only for an index
    built from an empty corpus.
    """

    bits: int
    bins: dict[Signature, list[int]] = field(default_factory=dict)
    sentences: list[str] = field(default_factory=list)


@dataclass
class BinStats:
    bits_evaluated: int
    populated_bins: int
    percent_populated: float
    mean_sentences_per_bin: float
    std_sentences_per_bin: float
    mean_distinct_unigrams_per_bin: float
    std_distinct_unigrams_per_bin: float


def build_index(signatures: list[Signature], matrix: EmbeddingMatrix) -> BinIndex:
    """Group corpus rows by signature; every row lands in exactly one bin."""
    if len(signatures) != matrix.count:
        raise ValueError(f"{len(signatures)} signatures for {matrix.count} rows")
    if not signatures:
        return BinIndex(bits=0, bins={}, sentences=list(matrix.sentences))
    widths = {s.bits for s in signatures}
    if len(widths) > 1:
        raise ValueError(f"mixed signature widths: {sorted(widths)}")
    bins: dict[Signature, list[int]] = {}
    for i, sig in enumerate(signatures):
        bins.setdefault(sig, []).append(i)
    return BinIndex(bits=widths.pop(), bins=bins, sentences=list(matrix.sentences))


def bin_stats(index: BinIndex, prefix_bits: int) -> BinStats:
    """Re-bin by the first ``prefix_bits`` signature bits and summarise.

    Reports the populated-bin count, the percentage of the 2**prefix_bits
    possible bins that are populated, and mean +- population std of the
    distinct sentences (exact string match after trailing-whitespace
    trim) and distinct whitespace-delimited unigrams per populated bin.
    """
    if not 1 <= prefix_bits <= index.bits:
        raise ValueError(f"prefix_bits {prefix_bits} outside [1, {index.bits}]")
    merged: dict[str, list[int]] = {}
    for sig, members in index.bins.items():
        merged.setdefault(str(sig)[:prefix_bits], []).extend(members)
    if not merged:
        return BinStats(prefix_bits, 0, 0.0, 0.0, 0.0, 0.0, 0.0)
    sentence_counts = []
    unigram_counts = []
    for members in merged.values():
        texts = [index.sentences[i] for i in members]
        sentence_counts.append(len({t.rstrip() for t in texts}))
        unigram_counts.append(len({tok for t in texts for tok in t.split()}))
    sentences = np.asarray(sentence_counts, dtype=np.float64)
    unigrams = np.asarray(unigram_counts, dtype=np.float64)
    populated = len(merged)
    return BinStats(
        bits_evaluated=prefix_bits,
        populated_bins=populated,
        percent_populated=100.0 * populated / (1 << prefix_bits),
        mean_sentences_per_bin=float(sentences.mean()),
        std_sentences_per_bin=float(sentences.std()),
        mean_distinct_unigrams_per_bin=float(unigrams.mean()),
        std_distinct_unigrams_per_bin=float(unigrams.std()),
    )


def bin_medoid(index: BinIndex, matrix: EmbeddingMatrix, signature: Signature) -> int:
    """Member minimising the summed cosine distance to the rest of its bin.

    Ties break toward the lowest corpus index.
    """
    members = index.bins.get(signature)
    if not members:
        raise NotFoundError(f"no bin for signature {signature}")
    if len(members) == 1:
        return members[0]
    vectors = matrix.vectors[members].astype(np.float64)
    unit = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
    sims = unit @ unit.T
    sims = (sims + sims.T) / 2.0  # exact symmetry so mirrored pairs tie exactly
    np.fill_diagonal(sims, 0.0)  # keep self-similarity rounding out of the sums
    n = len(members)
    distance_sums = (n - 1) - sims.sum(axis=1)
    return members[int(np.argmin(distance_sums))]


def query_prefix(index: BinIndex, prefix: str) -> list[int]:
    """All members whose signature starts with ``prefix``, in corpus order."""
    if not 1 <= len(prefix) <= index.bits:
        raise ValueError(f"prefix length {len(prefix)} outside [1, {index.bits}]")
    if any(c not in "01" for c in prefix):
        raise ValueError(f"prefix must be a '0'/'1' string: {prefix!r}")
    out: list[int] = []
    for sig, members in index.bins.items():
        if str(sig).startswith(prefix):
            out.extend(members)
    return sorted(out)
