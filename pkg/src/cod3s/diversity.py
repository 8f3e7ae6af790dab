"""Diversity metrics over candidate sets and rank-correlation evaluation.

The headline metric is the pairwise average of a dissimilarity over all
ordered pairs of a candidate set: inverse (100 minus) sentence-level
BLEU-1/-2 for lexical diversity, embedding cosine distance for semantic
diversity. Semantically distinct outputs are counted by greedily ruling
out candidates whose embedding sits within a cosine-distance threshold
of an already-kept one.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.stats import rankdata

from .embeddings import EmbeddingMatrix, cosine_similarity
from .lsh import approx_cosine, generate_hyperplanes, hamming_distance, hash_corpus


class DuplicateEntry(NamedTuple):
    index: int
    representative: int
    distance: float


@dataclass
class DiversityReport:
    set_size: int
    bleu1_diversity: float
    bleu2_diversity: float
    cosine_diversity: float
    distinct_count: int
    duplicate_map: list[DuplicateEntry]


@dataclass
class StsTable:
    """One rank-correlation row per distance flavour: full-precision cosine
    first, then one row per requested signature width."""

    rows: list[tuple[str, float]]


_TOKEN = re.compile(r"\w+|[^\w\s]")


def tokenize(text: str) -> list[str]:
    """Lowercase, split punctuation marks from words, split on whitespace."""
    return _TOKEN.findall(text.lower())


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def sentence_bleu(hyp: str, ref: str, max_n: int) -> float:
    """Single-reference sentence BLEU in [0, 100].

    100 * BP * geometric mean of clipped n-gram precisions up to max_n,
    with brevity penalty min(1, e^(1 - |ref|/|hyp|)). Any zero precision
    (including a hypothesis too short to have n-grams) gives 0; so does
    an empty hypothesis. No smoothing: the disjoint-vocabulary case must
    score exactly 0.
    """
    if max_n not in (1, 2):
        raise ValueError("max_n must be 1 or 2")
    ref_tokens = tokenize(ref)
    if not ref_tokens:
        raise ValueError("reference sentence has no tokens")
    hyp_tokens = tokenize(hyp)
    if not hyp_tokens:
        return 0.0
    log_precisions = 0.0
    for n in range(1, max_n + 1):
        hyp_counts = _ngrams(hyp_tokens, n)
        total = sum(hyp_counts.values())
        if total == 0:
            return 0.0
        ref_counts = _ngrams(ref_tokens, n)
        clipped = sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
        if clipped == 0:
            return 0.0
        log_precisions += math.log(clipped / total)
    brevity = min(1.0, math.exp(1.0 - len(ref_tokens) / len(hyp_tokens)))
    return 100.0 * brevity * math.exp(log_precisions / max_n)


_METRICS = ("inv-bleu1", "inv-bleu2", "cosine")


def pairwise_diversity(
    sentences: list[str],
    metric: str,
    embeddings: EmbeddingMatrix | None = None,
) -> float:
    """Mean dissimilarity over all ordered pairs y != y' of the set.

    inv-bleu1/inv-bleu2 use 100 - BLEU; cosine uses 1 - cosine
    similarity of the index-aligned embedding rows.
    """
    if metric not in _METRICS:
        raise ValueError(f"metric must be one of {_METRICS}")
    n = len(sentences)
    if n < 2:
        raise ValueError("diversity needs at least two candidates")
    if metric == "cosine":
        if embeddings is None:
            raise ValueError("cosine diversity needs an embedding matrix")
        if embeddings.count != n:
            raise ValueError(f"{embeddings.count} embedding rows for {n} sentences")
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if metric == "cosine":
                total += 1.0 - cosine_similarity(embeddings.row(i), embeddings.row(j))
            else:
                max_n = 1 if metric == "inv-bleu1" else 2
                total += 100.0 - sentence_bleu(sentences[i], sentences[j], max_n)
    return total / (n * (n - 1))


def count_distinct(
    sentences: list[str], embeddings: EmbeddingMatrix, threshold: float
) -> tuple[int, list[DuplicateEntry]]:
    """Greedy duplicate ruling over rank-ordered candidates.

    A candidate is a duplicate iff its embedding's cosine distance to
    some already-kept candidate is strictly below the threshold; the map
    records the nearest kept representative. Embedding row i must encode
    candidate i's completed phrase.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    if embeddings.count != len(sentences):
        raise ValueError(f"{embeddings.count} embedding rows for {len(sentences)} candidates")
    kept: list[int] = []
    duplicates: list[DuplicateEntry] = []
    for i in range(len(sentences)):
        distances = [
            1.0 - cosine_similarity(embeddings.row(i), embeddings.row(j)) for j in kept
        ]
        if distances and min(distances) < threshold:
            nearest = int(np.argmin(distances))
            duplicates.append(DuplicateEntry(i, kept[nearest], distances[nearest]))
        else:
            kept.append(i)
    return len(kept), duplicates


def diversity_report(
    sentences: list[str], embeddings: EmbeddingMatrix, threshold: float
) -> DiversityReport:
    """All diversity metrics plus the distinct-output count in one record."""
    distinct, duplicates = count_distinct(sentences, embeddings, threshold)
    return DiversityReport(
        set_size=len(sentences),
        bleu1_diversity=pairwise_diversity(sentences, "inv-bleu1"),
        bleu2_diversity=pairwise_diversity(sentences, "inv-bleu2"),
        cosine_diversity=pairwise_diversity(sentences, "cosine", embeddings),
        distinct_count=distinct,
        duplicate_map=duplicates,
    )


def spearman_rho(a, b) -> float:
    """Rank correlation with average ranks for ties.

    Pearson correlation of the rank vectors; when neither input has
    ties this is computed through the exact rank-difference identity,
    which keeps perfectly (anti)monotone inputs at exactly +/-1.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise ValueError("inputs must be equal-length 1-D sequences")
    n = a.size
    if n < 3:
        raise ValueError("rank correlation needs at least 3 observations")
    ranks_a = rankdata(a)
    ranks_b = rankdata(b)
    if np.unique(a).size == 1 or np.unique(b).size == 1:
        raise ValueError("rank correlation is undefined for constant input")
    if np.unique(a).size == n and np.unique(b).size == n:
        d = ranks_a.astype(np.int64) - ranks_b.astype(np.int64)
        return 1.0 - 6.0 * float(d @ d) / (n * (n * n - 1))
    da = ranks_a - ranks_a.mean()
    db = ranks_b - ranks_b.mean()
    return float((da @ db) / math.sqrt((da @ da) * (db @ db)))


def sts_eval(
    pairs: list[tuple[int, int, float]],
    matrix: EmbeddingMatrix,
    widths: list[int],
    seed: int,
) -> StsTable:
    """Correlate human similarity scores with cosine and with each width's
    Hamming-implied cosine, hashing both sides under one seed per width."""
    if len(pairs) < 3:
        raise ValueError("need at least 3 scored pairs")
    for ia, ib, _ in pairs:
        if not (0 <= ia < matrix.count and 0 <= ib < matrix.count):
            raise ValueError(f"pair ({ia}, {ib}) outside corpus of {matrix.count}")
    human = [score for _, _, score in pairs]
    cosines = [
        cosine_similarity(matrix.row(ia), matrix.row(ib)) for ia, ib, _ in pairs
    ]
    rows = [("cosine", spearman_rho(human, cosines))]
    needed = sorted({i for ia, ib, _ in pairs for i in (ia, ib)})
    sub = EmbeddingMatrix(matrix.vectors[needed], [""] * len(needed))
    position = {corpus_i: k for k, corpus_i in enumerate(needed)}
    for bits in widths:
        planes = generate_hyperplanes(matrix.dim, bits, seed)
        signatures = hash_corpus(planes, sub)
        approx = [
            approx_cosine(
                hamming_distance(signatures[position[ia]], signatures[position[ib]]), bits
            )
            for ia, ib, _ in pairs
        ]
        rows.append((f"{bits}-bit", spearman_rho(human, approx)))
    return StsTable(rows=rows)
