import numpy as np
import pytest

from cod3s import (
    EmbeddingMatrix,
    NotFoundError,
    Signature,
    bin_medoid,
    bin_stats,
    build_index,
    cosine_similarity,
    query_prefix,
)
from conftest import random_matrix


def sigs(*texts):
    return [Signature.from_string(t) for t in texts]


def matrix_of(count, dim=4, seed=0):
    rng = np.random.default_rng(seed)
    return EmbeddingMatrix(
        rng.normal(size=(count, dim)), [f"sentence number {i}" for i in range(count)]
    )


class TestBuildIndex:
    def test_empty_corpus(self):
        index = build_index([], EmbeddingMatrix(np.empty((0, 4)), []))
        assert index.bins == {}
        assert index.bits == 0

    def test_grouping(self):
        index = build_index(sigs("01", "01", "10"), matrix_of(3))
        assert index.bins == {
            Signature.from_string("01"): [0, 1],
            Signature.from_string("10"): [2],
        }

    def test_partition_property(self, rng):
        matrix = random_matrix(rng, 200, 4)
        signatures = [
            Signature.from_string("".join(rng.choice(["0", "1"], size=6))) for _ in range(200)
        ]
        index = build_index(signatures, matrix)
        seen = sorted(i for members in index.bins.values() for i in members)
        assert seen == list(range(200))  # union is everything, no index twice
        for sig, members in index.bins.items():
            assert all(signatures[i] == sig for i in members)
            assert members == sorted(members)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            build_index(sigs("01"), matrix_of(2))

    def test_mixed_widths(self):
        with pytest.raises(ValueError, match="width"):
            build_index(sigs("01", "011"), matrix_of(2))


class TestBinStats:
    def test_worked_example(self):
        matrix = EmbeddingMatrix(
            np.eye(3), ["the cat sat", "a dog ran", "a bird flew away"]
        )
        stats = bin_stats(build_index(sigs("00", "01", "01"), matrix), 2)
        assert stats.populated_bins == 2
        assert stats.percent_populated == 50.0
        assert stats.mean_sentences_per_bin == 1.5
        assert stats.std_sentences_per_bin == 0.5
        # bins: "00" has {the,cat,sat}; "01" has {a,dog,ran,bird,flew,away}
        assert stats.mean_distinct_unigrams_per_bin == 4.5
        assert stats.std_distinct_unigrams_per_bin == 1.5

    def test_single_prefix_bit(self, rng):
        matrix = random_matrix(rng, 20, 4)
        signatures = [
            Signature.from_string("".join(rng.choice(["0", "1"], size=4))) for _ in range(20)
        ]
        stats = bin_stats(build_index(signatures, matrix), 1)
        assert stats.populated_bins in (1, 2)

    def test_degenerate_single_bin(self):
        matrix = EmbeddingMatrix(np.eye(4), [f"s{i}" for i in range(4)])
        stats = bin_stats(build_index(sigs("10", "10", "10", "10"), matrix), 2)
        assert stats.mean_sentences_per_bin == 4.0
        assert stats.std_sentences_per_bin == 0.0

    def test_distinct_counts_ignore_trailing_whitespace(self):
        matrix = EmbeddingMatrix(np.eye(2), ["same words", "same words  "])
        stats = bin_stats(build_index(sigs("1", "1"), matrix), 1)
        assert stats.mean_sentences_per_bin == 1.0

    def test_mean_times_populated_recovers_count(self, rng):
        # duplicate-free corpus at full width
        matrix = matrix_of(50)
        signatures = [
            Signature.from_string("".join(rng.choice(["0", "1"], size=8))) for _ in range(50)
        ]
        stats = bin_stats(build_index(signatures, matrix), 8)
        assert stats.mean_sentences_per_bin * stats.populated_bins == pytest.approx(50)

    def test_percent_non_increasing_in_width(self, rng):
        matrix = random_matrix(rng, 300, 4)
        signatures = [
            Signature.from_string("".join(rng.choice(["0", "1"], size=10)))
            for _ in range(300)
        ]
        index = build_index(signatures, matrix)
        percents = [bin_stats(index, w).percent_populated for w in range(1, 11)]
        assert all(a >= b for a, b in zip(percents, percents[1:]))

    def test_domain_errors(self):
        index = build_index(sigs("01"), matrix_of(1))
        for bad in (0, 3):
            with pytest.raises(ValueError):
                bin_stats(index, bad)


class TestBinMedoid:
    def test_singleton(self):
        index = build_index(sigs("0", "1"), matrix_of(2))
        assert bin_medoid(index, matrix_of(2), Signature.from_string("0")) == 0

    def test_two_members_tie_breaks_low(self):
        matrix = matrix_of(4, seed=3)
        index = build_index(sigs("1", "0", "1", "0"), matrix)
        assert bin_medoid(index, matrix, Signature.from_string("1")) == 0
        assert bin_medoid(index, matrix, Signature.from_string("0")) == 1

    def test_matches_brute_force(self, rng):
        for trial in range(20):
            size = int(rng.integers(2, 9))
            matrix = matrix_of(size, dim=6, seed=trial)
            index = build_index(sigs(*["1"] * size), matrix)
            got = bin_medoid(index, matrix, Signature.from_string("1"))
            sums = [
                sum(
                    1 - cosine_similarity(matrix.row(m), matrix.row(o))
                    for o in range(size)
                    if o != m
                )
                for m in range(size)
            ]
            assert got == int(np.argmin(sums))

    def test_unpopulated_signature(self):
        index = build_index(sigs("0"), matrix_of(1))
        with pytest.raises(NotFoundError):
            bin_medoid(index, matrix_of(1), Signature.from_string("1"))


class TestQueryPrefix:
    def test_full_width_equals_exact_lookup(self, rng):
        matrix = random_matrix(rng, 40, 4)
        signatures = [
            Signature.from_string("".join(rng.choice(["0", "1"], size=5))) for _ in range(40)
        ]
        index = build_index(signatures, matrix)
        for sig, members in index.bins.items():
            assert query_prefix(index, str(sig)) == members

    def test_length_one_prefix_unions_half(self):
        index = build_index(sigs("00", "01", "10", "11"), matrix_of(4))
        assert query_prefix(index, "0") == [0, 1]
        assert query_prefix(index, "1") == [2, 3]

    def test_refinement_identity(self, rng):
        matrix = random_matrix(rng, 60, 4)
        signatures = [
            Signature.from_string("".join(rng.choice(["0", "1"], size=4))) for _ in range(60)
        ]
        index = build_index(signatures, matrix)
        for width in range(1, 4):
            for value in range(1 << width):
                prefix = format(value, f"0{width}b")
                zero = query_prefix(index, prefix + "0")
                one = query_prefix(index, prefix + "1")
                assert not set(zero) & set(one)
                assert sorted(zero + one) == query_prefix(index, prefix)

    def test_bad_prefixes(self):
        index = build_index(sigs("01"), matrix_of(1))
        for bad in ("", "012", "ab", "011"):
            with pytest.raises(ValueError):
                query_prefix(index, bad)
