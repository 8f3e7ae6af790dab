"""Binning a corpus by signature and walking the prefix hierarchy.

Builds a synthetic corpus of five loose "topics", hashes it, and shows
how bins populate as the prefix widens, plus each topic bin's medoid.
"""

import numpy as np

from cod3s import (
    EmbeddingMatrix,
    bin_medoid,
    bin_stats,
    build_index,
    generate_hyperplanes,
    hash_corpus,
    query_prefix,
)

rng = np.random.default_rng(3)
DIM, TOPICS, PER_TOPIC = 64, 5, 40

centers = rng.normal(size=(TOPICS, DIM)) * 3
vectors, sentences = [], []
for topic in range(TOPICS):
    for i in range(PER_TOPIC):
        vectors.append(centers[topic] + rng.normal(size=DIM))
        sentences.append(f"topic {topic} sentence {i} about thing {topic}")
matrix = EmbeddingMatrix(np.asarray(vectors), sentences)

planes = generate_hyperplanes(DIM, 16, seed=11)
signatures = hash_corpus(planes, matrix)
index = build_index(signatures, matrix)

print("== population by prefix width ==")
print(f"{'width':>6} {'bins':>6} {'% of 2^w':>9} {'sentences/bin':>14}")
for width in (2, 4, 8, 12, 16):
    s = bin_stats(index, width)
    print(
        f"{width:>6} {s.populated_bins:>6} {s.percent_populated:>8.2f}% "
        f"{s.mean_sentences_per_bin:>8.2f} +-{s.std_sentences_per_bin:.2f}"
    )

print("\n== the five largest bins and their medoids ==")
largest = sorted(index.bins.items(), key=lambda kv: -len(kv[1]))[:5]
for sig, members in largest:
    medoid = bin_medoid(index, matrix, sig)
    print(f"{sig}  ({len(members):>3} members)  medoid: {matrix.sentences[medoid]!r}")

sig = str(largest[0][0])
print(f"\n== refining prefix {sig[:4]}... ==")
for width in (2, 3, 4):
    members = query_prefix(index, sig[:width])
    print(f"prefix {sig[:width]:<4} -> {len(members)} sentences")
print("Each extra bit splits a bin in two; nearby codes stay semantically close.")
