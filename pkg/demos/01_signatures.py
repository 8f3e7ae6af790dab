"""How b-bit signatures approximate cosine similarity.

Hashes pairs of vectors at several signature widths and compares the
Hamming-implied cosine cos(pi * d / b) against the true value.
"""

import math

import numpy as np

from cod3s import (
    EmbeddingMatrix,
    approx_cosine,
    generate_hyperplanes,
    hamming_distance,
    hash_corpus,
    hash_vector,
)

rng = np.random.default_rng(0)
DIM = 256

print("== one vector, one signature ==")
planes = generate_hyperplanes(DIM, 16, seed=7)
v = rng.normal(size=DIM)
sig = hash_vector(planes, v)
print(f"16-bit signature of a random vector: {sig}")
print(f"same vector, doubled: {hash_vector(planes, 2 * v)}  (scale-invariant)")
print(f"negated vector:       {hash_vector(planes, -v)}  (bitwise complement)")

print("\n== Hamming distance tracks the angle ==")
n_pairs = 400
left = rng.normal(size=(n_pairs, DIM))
right = np.empty_like(left)
angles = rng.uniform(0, np.pi, size=n_pairs)
for i in range(n_pairs):
    u = left[i] / np.linalg.norm(left[i])
    w = rng.normal(size=DIM)
    w -= (w @ u) * u
    w /= np.linalg.norm(w)
    right[i] = math.cos(angles[i]) * u + math.sin(angles[i]) * w
true_cos = np.cos(angles)

print(f"{'bits':>6} {'mean |approx - true|':>22}")
for bits in (8, 16, 32, 128, 256):
    planes = generate_hyperplanes(DIM, bits, seed=7)
    sig_l = hash_corpus(planes, EmbeddingMatrix(left, [""] * n_pairs))
    sig_r = hash_corpus(planes, EmbeddingMatrix(right, [""] * n_pairs))
    approx = np.array(
        [approx_cosine(hamming_distance(a, b), bits) for a, b in zip(sig_l, sig_r)]
    )
    print(f"{bits:>6} {np.abs(approx - true_cos).mean():>22.4f}")
print("\nWider signatures approximate the cosine better; narrow ones bin coarsely.")
