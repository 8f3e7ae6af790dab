"""Scoring candidate sets: pairwise diversity, duplicate ruling, rank tables.

Compares a homogeneous candidate set against a spread-out one, then
shows the distinct-output count falling as the cosine threshold rises.
"""

import numpy as np

from cod3s import EmbeddingMatrix, count_distinct, diversity_report, sts_eval

rng = np.random.default_rng(5)
DIM = 32


def embed_near(center, spread):
    return center + rng.normal(size=DIM) * spread


bland_center = rng.normal(size=DIM)
bland = [
    "he did not want to eat it",
    "he did not want to eat that",
    "he didn't want to eat it",
    "he did not wish to eat it",
]
bland_matrix = EmbeddingMatrix(
    np.stack([embed_near(bland_center, 0.05) for _ in bland]), bland
)

varied = [
    "he did not want to eat it",
    "it had been left out overnight",
    "the dog got to it first",
    "he was saving room for dessert",
]
varied_matrix = EmbeddingMatrix(
    np.stack([embed_near(rng.normal(size=DIM), 0.05) for _ in varied]), varied
)

for name, sentences, matrix in (
    ("near-duplicates", bland, bland_matrix),
    ("varied set", varied, varied_matrix),
):
    report = diversity_report(sentences, matrix, threshold=0.1)
    print(f"== {name} ==")
    print(f"  inverse BLEU-1 diversity: {report.bleu1_diversity:6.1f}")
    print(f"  inverse BLEU-2 diversity: {report.bleu2_diversity:6.1f}")
    print(f"  cosine diversity:         {report.cosine_diversity:6.3f}")
    print(f"  distinct at 0.1:          {report.distinct_count} of {report.set_size}")
    for dup in report.duplicate_map:
        print(f"    rank {dup.index} duplicates rank {dup.representative} ({dup.distance:.3f})")

print("\n== distinct count vs threshold (varied set) ==")
for threshold in (0.0, 0.1, 0.25, 0.5, 0.75):
    distinct, _ = count_distinct(varied, varied_matrix, threshold)
    print(f"  threshold {threshold:4.2f} -> {distinct} distinct")

print("\n== rank correlation table on synthetic scored pairs ==")
pairs, vectors = [], []
for i in range(200):
    u = rng.normal(size=DIM)
    u /= np.linalg.norm(u)
    w = rng.normal(size=DIM)
    w -= (w @ u) * u
    w /= np.linalg.norm(w)
    theta = rng.uniform(0, np.pi)
    vectors.extend([u, np.cos(theta) * u + np.sin(theta) * w])
    pairs.append((2 * i, 2 * i + 1, float(5 * (1 + np.cos(theta)) / 2)))
table = sts_eval(pairs, EmbeddingMatrix(np.asarray(vectors), [""] * 400), [8, 16, 64, 256], seed=9)
for label, rho in table.rows:
    print(f"  {label:>8}  rho = {rho:.3f}")
