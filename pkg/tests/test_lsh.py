import struct

import numpy as np
import pytest

from cod3s import (
    EmbeddingMatrix,
    FormatError,
    HyperplaneSet,
    Signature,
    approx_cosine,
    generate_hyperplanes,
    hamming_distance,
    hash_corpus,
    hash_vector,
    load_hyperplanes,
    save_hyperplanes,
)
from conftest import random_matrix


class TestSignature:
    def test_string_roundtrip(self, rng):
        for _ in range(100):
            bits = int(rng.integers(1, 70))
            text = "".join(rng.choice(["0", "1"], size=bits))
            assert str(Signature.from_string(text)) == text

    def test_packing_layout(self):
        sig = Signature.from_string("101")
        assert sig.payload == b"\x05"  # bit 0 -> LSB
        assert sig.bits == 3

    def test_pad_bits_must_be_zero(self):
        with pytest.raises(ValueError, match="pad"):
            Signature(bits=3, payload=b"\xff")

    def test_bad_text_rejected(self):
        for text in ("", "01x", "2"):
            with pytest.raises(ValueError):
                Signature.from_string(text)

    def test_usable_as_dict_key(self):
        a = Signature.from_string("0101")
        b = Signature.from_string("0101")
        assert a == b and hash(a) == hash(b)
        assert {a: 1}[b] == 1


class TestHamming:
    @pytest.mark.parametrize(
        "a,b,expected",
        [("0000", "0000", 0), ("0101", "1010", 4), ("0011", "0001", 1)],
    )
    def test_examples(self, a, b, expected):
        assert hamming_distance(Signature.from_string(a), Signature.from_string(b)) == expected

    def test_width_mismatch(self):
        with pytest.raises(ValueError, match="width"):
            hamming_distance(Signature.from_string("01"), Signature.from_string("011"))

    def test_metric_properties(self, rng):
        sigs = [
            Signature.from_string("".join(rng.choice(["0", "1"], size=12)))
            for _ in range(30)
        ]
        for _ in range(200):
            a, b, c = (sigs[i] for i in rng.integers(0, len(sigs), size=3))
            dab = hamming_distance(a, b)
            assert dab >= 0
            assert dab == hamming_distance(b, a)
            assert (dab == 0) == (a == b)
            assert dab <= hamming_distance(a, c) + hamming_distance(c, b)


class TestApproxCosine:
    def test_endpoints(self):
        assert approx_cosine(0, 16) == 1.0
        assert approx_cosine(16, 16) == -1.0
        assert abs(approx_cosine(8, 16)) < 1e-12

    def test_hand_value(self):
        assert approx_cosine(4, 16) == pytest.approx(0.70711, abs=1e-5)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            approx_cosine(17, 16)
        with pytest.raises(ValueError):
            approx_cosine(-1, 16)
        with pytest.raises(ValueError):
            approx_cosine(0, 0)


class TestGenerateHyperplanes:
    def test_deterministic_per_seed(self):
        a = generate_hyperplanes(32, 8, 42)
        b = generate_hyperplanes(32, 8, 42)
        np.testing.assert_array_equal(a.normals, b.normals)

    def test_seeds_differ(self):
        a = generate_hyperplanes(32, 8, 1)
        b = generate_hyperplanes(32, 8, 2)
        assert (a.normals != b.normals).any()

    def test_gaussian_mean(self):
        planes = generate_hyperplanes(1024, 16, 42)
        assert planes.normals.shape == (16, 1024)
        assert abs(float(planes.normals.mean())) < 0.05

    def test_width_prefix_sharing(self):
        narrow = generate_hyperplanes(64, 8, 7)
        wide = generate_hyperplanes(64, 32, 7)
        np.testing.assert_array_equal(wide.normals[:8], narrow.normals)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            generate_hyperplanes(0, 8, 1)
        with pytest.raises(ValueError):
            generate_hyperplanes(8, 0, 1)
        with pytest.raises(ValueError):
            generate_hyperplanes(8, 8, -1)
        with pytest.raises(ValueError):
            generate_hyperplanes(8, 8, 2**64)


class TestHyperplaneFile:
    def test_roundtrip(self, tmp_path):
        planes = generate_hyperplanes(48, 12, 99)
        path = tmp_path / "p.lsh"
        save_hyperplanes(planes, path)
        loaded = load_hyperplanes(path)
        np.testing.assert_array_equal(loaded.normals, planes.normals)
        assert loaded.seed == 99
        assert loaded.generator == planes.generator

    def test_header_layout(self, tmp_path):
        planes = generate_hyperplanes(4, 2, 5)
        path = tmp_path / "p.lsh"
        save_hyperplanes(planes, path)
        raw = path.read_bytes()
        magic, bits, dim, seed, generator = struct.unpack_from("<8sIIQI", raw)
        assert magic == b"CODLSH1\x00"
        assert (bits, dim, seed, generator) == (2, 4, 5, 1)
        assert len(raw) == 28 + 4 * 8

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.lsh"
        path.write_bytes(b"X" * 40)
        with pytest.raises(FormatError, match="magic"):
            load_hyperplanes(path)


class TestHashVector:
    def test_hand_example(self):
        planes = HyperplaneSet(np.array([[1, 1], [-1, 1], [0, -1]], dtype=np.float32), seed=0)
        assert str(hash_vector(planes, [1.0, 0.0])) == "101"  # dots 1, -1, 0; tie -> 1

    def test_scale_invariance(self, rng):
        planes = generate_hyperplanes(16, 8, 3)
        for _ in range(20):
            v = rng.normal(size=16)
            assert hash_vector(planes, v) == hash_vector(planes, 2.0 * v)

    def test_negation_complements(self, rng):
        planes = generate_hyperplanes(16, 8, 3)
        for _ in range(20):
            v = rng.normal(size=16)
            dots = planes.normals.astype(np.float64) @ v
            assume_no_tie = (dots != 0).all()
            assert assume_no_tie  # measure-zero for Gaussian data
            flipped = str(hash_vector(planes, -v))
            original = str(hash_vector(planes, v))
            assert flipped == "".join("1" if c == "0" else "0" for c in original)

    def test_bit_i_depends_only_on_row_i(self, rng):
        planes = generate_hyperplanes(8, 6, 11)
        v = rng.normal(size=8)
        base = str(hash_vector(planes, v))
        for j in range(planes.bits):
            altered = planes.normals.copy()
            altered[j] = rng.normal(size=8)
            other = str(hash_vector(HyperplaneSet(altered, seed=0), v))
            for i in range(planes.bits):
                if i != j:
                    assert other[i] == base[i]

    def test_dimension_mismatch(self):
        planes = generate_hyperplanes(8, 4, 1)
        with pytest.raises(ValueError, match="dim"):
            hash_vector(planes, np.ones(9))

    def test_zero_vector_rejected(self):
        planes = generate_hyperplanes(4, 4, 1)
        with pytest.raises(ValueError, match="zero"):
            hash_vector(planes, np.zeros(4))


class TestHashCorpus:
    def test_empty(self):
        planes = generate_hyperplanes(8, 4, 1)
        assert hash_corpus(planes, EmbeddingMatrix(np.empty((0, 8)), [])) == []

    def test_matches_per_row_hashing(self, rng):
        planes = generate_hyperplanes(8, 4, 21)
        matrix = random_matrix(rng, 100, 8)
        corpus = hash_corpus(planes, matrix)
        assert corpus == [hash_vector(planes, matrix.row(i)) for i in range(100)]

    def test_dim_mismatch(self, rng):
        planes = generate_hyperplanes(9, 4, 21)
        with pytest.raises(ValueError, match="dim"):
            hash_corpus(planes, random_matrix(rng, 3, 8))


class TestHammingCosineFidelity:
    def test_approximation_error_shrinks_with_width(self, rng):
        dim, n_pairs = 128, 1000
        left = rng.normal(size=(n_pairs, dim))
        right = rng.normal(size=(n_pairs, dim))
        true_cos = np.einsum("ij,ij->i", left, right) / (
            np.linalg.norm(left, axis=1) * np.linalg.norm(right, axis=1)
        )
        errors = []
        for bits in (8, 16, 32, 128, 256):
            planes = generate_hyperplanes(dim, bits, 5)
            sig_left = hash_corpus(planes, EmbeddingMatrix(left, [""] * n_pairs))
            sig_right = hash_corpus(planes, EmbeddingMatrix(right, [""] * n_pairs))
            approx = np.array(
                [
                    approx_cosine(hamming_distance(a, b), bits)
                    for a, b in zip(sig_left, sig_right)
                ]
            )
            errors.append(float(np.abs(approx - true_cos).mean()))
        assert errors == sorted(errors, reverse=True), errors
