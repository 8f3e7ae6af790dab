import json
import subprocess
import sys

import numpy as np
import pytest

from cod3s import EmbeddingMatrix, load_embeddings, save_embeddings
from cod3s.cli import dispatch
from conftest import random_matrix


@pytest.fixture
def corpus(tmp_path, rng):
    matrix = random_matrix(rng, 12, 8)
    path = tmp_path / "corpus.emb"
    save_embeddings(matrix, path)
    return path


def run(*argv):
    return dispatch([str(a) for a in argv])


class TestGenHyperplanes:
    def test_deterministic_output_bytes(self, tmp_path):
        a, b = tmp_path / "a.lsh", tmp_path / "b.lsh"
        for path in (a, b):
            assert run("gen-hyperplanes", "--dim", 16, "--bits", 4, "--seed", 7, "-o", path) == 0
        assert a.read_bytes() == b.read_bytes()
        assert (
            (tmp_path / "a.lsh.manifest.json").read_text()
            == (tmp_path / "b.lsh.manifest.json").read_text()
        )

    def test_manifest_contents(self, tmp_path):
        path = tmp_path / "h.lsh"
        run("gen-hyperplanes", "--dim", 8, "--bits", 2, "--seed", 3, "-o", path)
        manifest = json.loads((tmp_path / "h.lsh.manifest.json").read_text())
        assert manifest["subcommand"] == "gen-hyperplanes"
        assert manifest["config"] == {"bits": 2, "dim": 8, "seed": 3}
        assert "version" in manifest

    def test_seed_is_required(self, tmp_path, capsys):
        assert run("gen-hyperplanes", "--dim", 8, "--bits", 2, "-o", tmp_path / "x") == 2
        assert "--seed" in capsys.readouterr().err


class TestHash:
    def test_one_line_per_corpus_row(self, tmp_path, corpus):
        planes = tmp_path / "h.lsh"
        out = tmp_path / "s.sig"
        run("gen-hyperplanes", "--dim", 8, "--bits", 6, "--seed", 1, "-o", planes)
        assert run("hash", "--embeddings", corpus, "--planes", planes, "-o", out) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == load_embeddings(corpus).count
        assert all(len(line) == 6 and set(line) <= {"0", "1"} for line in lines)

    def test_dim_mismatch_is_exit_1(self, tmp_path, corpus, capsys):
        planes = tmp_path / "h.lsh"
        run("gen-hyperplanes", "--dim", 9, "--bits", 4, "--seed", 1, "-o", planes)
        code = run("hash", "--embeddings", corpus, "--planes", planes, "-o", tmp_path / "s")
        assert code == 1
        err = capsys.readouterr().err
        assert err.count("\n") == 1 and "dim" in err


@pytest.fixture
def hashed_corpus(tmp_path, corpus):
    planes = tmp_path / "h.lsh"
    sig_path = tmp_path / "s.sig"
    run("gen-hyperplanes", "--dim", 8, "--bits", 6, "--seed", 1, "-o", planes)
    run("hash", "--embeddings", corpus, "--planes", planes, "-o", sig_path)
    return sig_path


class TestBins:
    def test_tsv_row_per_width(self, tmp_path, corpus, hashed_corpus):
        out = tmp_path / "stats.tsv"
        code = run(
            "bins", "--embeddings", corpus, "--signatures", hashed_corpus,
            "--widths", "2,4,6", "-o", out,
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 4  # header + 3 widths
        assert lines[0].split("\t")[0] == "bits_evaluated"
        assert [line.split("\t")[0] for line in lines[1:]] == ["2", "4", "6"]

    def test_stdout_when_no_output_flag(self, corpus, hashed_corpus, capsys):
        assert run("bins", "--embeddings", corpus, "--signatures", hashed_corpus, "--widths", "2") == 0
        assert "bits_evaluated" in capsys.readouterr().out


class TestMedoid:
    def test_reports_member_sentence(self, tmp_path, corpus, hashed_corpus, capsys):
        signature = hashed_corpus.read_text().splitlines()[0]
        code = run(
            "medoid", "--embeddings", corpus, "--signatures", hashed_corpus,
            "--signature", signature,
        )
        assert code == 0
        record = json.loads(capsys.readouterr().out)
        matrix = load_embeddings(corpus)
        assert record["sentence"] == matrix.sentences[record["index"]]

    def test_unpopulated_bin_is_exit_1(self, corpus, hashed_corpus, capsys):
        populated = set(hashed_corpus.read_text().splitlines())
        missing = next(
            format(v, "06b") for v in range(64) if format(v, "06b") not in populated
        )
        code = run(
            "medoid", "--embeddings", corpus, "--signatures", hashed_corpus,
            "--signature", missing,
        )
        assert code == 1


class TestDecode:
    def test_fixture_decode_jsonl(self, tmp_path, data_dir):
        out = tmp_path / "out.jsonl"
        code = run(
            "decode",
            "--source-file", data_dir / "decode_sources.txt",
            "--scorer", "fixture",
            "--fixture", data_dir / "decode_fixture.jsonl",
            "--k", 3, "-o", out,
        )
        assert code == 0
        records = [json.loads(line) for line in out.read_text().splitlines()]
        assert len(records) == 1
        assert len(records[0]["picks"]) == 3
        for pick in records[0]["picks"]:
            assert set(pick) == {
                "signature", "sentence", "signature_score", "sentence_score",
                "signature_forward_logprob", "sentence_forward_logprob",
            }

    def test_fixture_flag_required_in_fixture_mode(self, tmp_path, data_dir, capsys):
        code = run(
            "decode", "--source-file", data_dir / "decode_sources.txt",
            "--scorer", "fixture", "--k", 3,
        )
        assert code == 2
        assert "--fixture" in capsys.readouterr().err

    def test_ngram_decode(self, tmp_path, capsys):
        train = tmp_path / "train.tsv"
        train.write_text(
            "the dog barked\t0101\tthe cat ran\n"
            "the dog barked\t1010\ta bird sang\n"
            "the dog slept\t0110\tall was quiet\n",
            encoding="utf-8",
        )
        sources = tmp_path / "src.txt"
        sources.write_text("the dog barked\n", encoding="utf-8")
        code = run(
            "decode", "--source-file", sources, "--scorer", "ngram",
            "--train", train, "--k", 2, "--threshold", 1,
        )
        assert code == 0
        record = json.loads(capsys.readouterr().out)
        assert 1 <= len(record["picks"]) <= 2

    def test_process_mode_env_fallback(self, tmp_path, data_dir, monkeypatch, capsys):
        sources = tmp_path / "src.txt"
        sources.write_text("anything\n", encoding="utf-8")
        monkeypatch.setenv(
            "COD3S_SCORER_CMD", f"{sys.executable} {data_dir / 'toy_scorer.py'}"
        )
        code = run(
            "decode", "--source-file", sources, "--scorer", "process",
            "--k", 2, "--threshold", 1, "--no-mmi-signatures", "--no-mmi-sentences",
        )
        assert code == 0
        record = json.loads(capsys.readouterr().out)
        assert [p["signature"] for p in record["picks"]] == ["0000", "0011"]


class TestEvalCommands:
    def test_eval_diversity_report(self, tmp_path, corpus, capsys):
        matrix = load_embeddings(corpus)
        cands = tmp_path / "cands.txt"
        cands.write_text("".join(s + "\n" for s in matrix.sentences), encoding="utf-8")
        code = run(
            "eval-diversity", "--candidates", cands, "--embeddings", corpus,
            "--threshold", 0.1,
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["set_size"] == matrix.count
        assert report["distinct_count"] + len(report["duplicate_map"]) == matrix.count

    def test_eval_sts_table(self, tmp_path, corpus, capsys):
        pairs = tmp_path / "pairs.tsv"
        rows = [(0, 1, 2.5), (2, 3, 1.0), (4, 5, 4.0), (6, 7, 0.5)]
        pairs.write_text("".join(f"{a}\t{b}\t{s}\n" for a, b, s in rows), encoding="utf-8")
        code = run(
            "eval-sts", "--pairs", pairs, "--embeddings", corpus,
            "--widths", "4,8", "--seed", 5,
        )
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert [line.split("\t")[0] for line in lines] == ["cosine", "4-bit", "8-bit"]

    def test_eval_sts_seed_required(self, tmp_path, corpus, capsys):
        code = run(
            "eval-sts", "--pairs", tmp_path / "nope.tsv", "--embeddings", corpus,
            "--widths", "4",
        )
        assert code == 2


class TestDispatch:
    def test_unknown_subcommand_is_usage_error(self, capsys):
        assert run("frobnicate") == 2

    def test_missing_required_flag_prints_usage(self, capsys):
        assert run("hash") == 2
        assert "usage" in capsys.readouterr().err

    def test_module_entry_point(self, tmp_path):
        result = subprocess.run(
            [sys.executable, "-m", "cod3s", "gen-hyperplanes", "--dim", "4",
             "--bits", "2", "--seed", "1", "-o", str(tmp_path / "h.lsh")],
            capture_output=True, text=True,
        )
        assert result.returncode == 0
        assert (tmp_path / "h.lsh").exists()

    def test_writes_only_named_paths(self, tmp_path, corpus):
        planes = tmp_path / "h.lsh"
        before = set(tmp_path.iterdir())
        run("gen-hyperplanes", "--dim", 8, "--bits", 4, "--seed", 1, "-o", planes)
        created = set(tmp_path.iterdir()) - before
        assert created == {planes, tmp_path / "h.lsh.manifest.json"}
