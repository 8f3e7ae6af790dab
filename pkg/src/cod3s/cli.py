"""Command-line entry point wiring files to the toolkit operations.

Exit status: 0 on success, 1 for domain or contract errors (one-line
diagnostic on stderr), 2 for usage errors (argparse help text). Every
artifact written via ``-o`` gets a ``<path>.manifest.json`` sidecar
echoing the subcommand, inputs, configuration, and toolkit version, so
runs can be reproduced; manifests contain nothing non-deterministic.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .bins import bin_medoid, bin_stats, build_index
from .decoding import DiverseOutputs, PipelineConfig, run_pipeline
from .diversity import diversity_report, sts_eval
from .embeddings import load_embeddings
from .errors import Cod3sError
from .lsh import Signature, generate_hyperplanes, hash_corpus, load_hyperplanes, save_hyperplanes
from .scoring import ScorerConfig, open_gateway

SCORER_CMD_ENV = "COD3S_SCORER_CMD"

_BIN_STAT_COLUMNS = (
    "bits_evaluated",
    "populated_bins",
    "percent_populated",
    "mean_sentences_per_bin",
    "std_sentences_per_bin",
    "mean_distinct_unigrams_per_bin",
    "std_distinct_unigrams_per_bin",
)


def _write_output(args, text: str, manifest_inputs: dict, manifest_config: dict):
    output = getattr(args, "output", None)
    if output is None:
        sys.stdout.write(text)
        return
    Path(output).write_text(text, encoding="utf-8")
    manifest = {
        "subcommand": args.subcommand,
        "inputs": {k: str(v) for k, v in manifest_inputs.items()},
        "config": manifest_config,
        "version": __version__,
    }
    Path(str(output) + ".manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def _load_signatures(path: str) -> list[Signature]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [Signature.from_string(line) for line in lines if line]


def _parse_widths(text: str) -> list[int]:
    try:
        widths = [int(w) for w in text.split(",") if w.strip()]
    except ValueError as exc:
        raise ValueError(f"bad width list {text!r}") from exc
    if not widths:
        raise ValueError("width list is empty")
    return widths


def cmd_gen_hyperplanes(args) -> int:
    planes = generate_hyperplanes(args.dim, args.bits, args.seed)
    save_hyperplanes(planes, args.output)
    manifest = {
        "subcommand": args.subcommand,
        "inputs": {},
        "config": {"dim": args.dim, "bits": args.bits, "seed": args.seed},
        "version": __version__,
    }
    Path(str(args.output) + ".manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return 0


def cmd_hash(args) -> int:
    matrix = load_embeddings(args.embeddings)
    planes = load_hyperplanes(args.planes)
    signatures = hash_corpus(planes, matrix)
    text = "".join(str(sig) + "\n" for sig in signatures)
    _write_output(
        args,
        text,
        {"embeddings": args.embeddings, "planes": args.planes},
        {"bits": planes.bits, "seed": planes.seed},
    )
    return 0


def cmd_bins(args) -> int:
    matrix = load_embeddings(args.embeddings)
    index = build_index(_load_signatures(args.signatures), matrix)
    widths = _parse_widths(args.widths)
    lines = ["\t".join(_BIN_STAT_COLUMNS)]
    for width in widths:
        stats = bin_stats(index, width)
        record = asdict(stats)
        lines.append("\t".join(_format_cell(record[col]) for col in _BIN_STAT_COLUMNS))
    _write_output(
        args,
        "\n".join(lines) + "\n",
        {"embeddings": args.embeddings, "signatures": args.signatures},
        {"widths": widths},
    )
    return 0


def _format_cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def cmd_medoid(args) -> int:
    matrix = load_embeddings(args.embeddings)
    index = build_index(_load_signatures(args.signatures), matrix)
    signature = Signature.from_string(args.signature)
    medoid = bin_medoid(index, matrix, signature)
    record = {
        "signature": args.signature,
        "index": medoid,
        "sentence": matrix.sentences[medoid],
    }
    _write_output(
        args,
        json.dumps(record) + "\n",
        {"embeddings": args.embeddings, "signatures": args.signatures},
        {"signature": args.signature},
    )
    return 0


def _scorer_config(args, parser: argparse.ArgumentParser) -> ScorerConfig:
    if args.scorer == "fixture":
        if not args.fixture:
            parser.error("--fixture is required with --scorer fixture")
        endpoint = args.fixture
    elif args.scorer == "ngram":
        if not args.train:
            parser.error("--train is required with --scorer ngram")
        endpoint = args.train
    else:
        endpoint = args.scorer_cmd or os.environ.get(SCORER_CMD_ENV)
        if not endpoint:
            parser.error(f"--scorer-cmd or ${SCORER_CMD_ENV} is required with --scorer process")
    return ScorerConfig(
        mode=args.scorer,
        signature_beam=args.signature_beam,
        sentence_beam=args.sentence_beam,
        endpoint=endpoint,
    )


def _outputs_to_json(outputs: DiverseOutputs) -> str:
    return json.dumps(
        {
            "source": outputs.source,
            "picks": [
                {
                    "signature": str(p.signature),
                    "sentence": p.sentence,
                    "signature_score": p.signature_score,
                    "sentence_score": p.sentence_score,
                    "signature_forward_logprob": p.signature_forward_logprob,
                    "sentence_forward_logprob": p.sentence_forward_logprob,
                }
                for p in outputs.picks
            ],
            "gaps": [str(sig) for sig in outputs.gaps],
        }
    )


def cmd_decode(args) -> int:
    scorer_cfg = _scorer_config(args, args._parser)
    pipeline_cfg = PipelineConfig(
        k=args.k,
        lambda_s=args.lambda_s,
        lambda_y=args.lambda_y,
        hamming_threshold=args.threshold,
        mmi_signatures=args.mmi_signatures,
        mmi_sentences=args.mmi_sentences,
    )
    sources = [
        line for line in Path(args.source_file).read_text(encoding="utf-8").splitlines() if line
    ]
    gateway = open_gateway(scorer_cfg)
    try:
        lines = [
            _outputs_to_json(run_pipeline(source, pipeline_cfg, gateway, jobs=args.jobs))
            for source in sources
        ]
    finally:
        gateway.close()
    _write_output(
        args,
        "".join(line + "\n" for line in lines),
        {"source_file": args.source_file, "scorer_endpoint": str(scorer_cfg.endpoint)},
        {
            "k": args.k,
            "lambda_s": args.lambda_s,
            "lambda_y": args.lambda_y,
            "threshold": args.threshold,
            "scorer": args.scorer,
            "signature_beam": args.signature_beam,
            "sentence_beam": args.sentence_beam,
            "mmi_signatures": args.mmi_signatures,
            "mmi_sentences": args.mmi_sentences,
        },
    )
    return 0


def cmd_eval_diversity(args) -> int:
    matrix = load_embeddings(args.embeddings)
    candidates = [
        line for line in Path(args.candidates).read_text(encoding="utf-8").splitlines() if line
    ]
    report = diversity_report(candidates, matrix, args.threshold)
    record = asdict(report)
    record["duplicate_map"] = [
        {"index": d.index, "representative": d.representative, "distance": d.distance}
        for d in report.duplicate_map
    ]
    _write_output(
        args,
        json.dumps(record) + "\n",
        {"candidates": args.candidates, "embeddings": args.embeddings},
        {"threshold": args.threshold},
    )
    return 0


def cmd_eval_sts(args) -> int:
    matrix = load_embeddings(args.embeddings)
    pairs = []
    for lineno, line in enumerate(Path(args.pairs).read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{args.pairs}:{lineno}: expected 3 tab-separated columns")
        pairs.append((int(parts[0]), int(parts[1]), float(parts[2])))
    widths = _parse_widths(args.widths)
    table = sts_eval(pairs, matrix, widths, args.seed)
    text = "".join(f"{label}\t{rho:.6f}\n" for label, rho in table.rows)
    _write_output(
        args,
        text,
        {"pairs": args.pairs, "embeddings": args.embeddings},
        {"widths": widths, "seed": args.seed},
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cod3s",
        description="Semantic signature toolkit: hash sentence embeddings into "
        "locality-sensitive codes, bin corpora, decode diverse outputs, score diversity.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen-hyperplanes", help="sample a seeded hyperplane file")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen_hyperplanes)

    p = sub.add_parser("hash", help="hash an embedding corpus into signature lines")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--planes", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_hash)

    p = sub.add_parser("bins", help="bin-population statistics per prefix width (TSV)")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--signatures", required=True)
    p.add_argument("--widths", required=True, help="comma-separated prefix widths")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bins)

    p = sub.add_parser("medoid", help="representative sentence of one bin (JSON)")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--signatures", required=True)
    p.add_argument("--signature", required=True, help="bin signature as a '0'/'1' string")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_medoid)

    p = sub.add_parser("decode", help="two-stage diverse decoding (JSON lines)")
    p.add_argument("--source-file", required=True, help="one source sentence per line")
    p.add_argument("--scorer", required=True, choices=("fixture", "process", "ngram"))
    p.add_argument("--fixture", help="fixture JSONL path (fixture mode)")
    p.add_argument("--train", help="training TSV path (ngram mode)")
    p.add_argument("--scorer-cmd", help=f"scorer command line (process mode; or ${SCORER_CMD_ENV})")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda-s", type=float, default=1000.0)
    p.add_argument("--lambda-y", type=float, default=0.3)
    p.add_argument("--threshold", type=int, default=2)
    p.add_argument("--signature-beam", type=int, default=100)
    p.add_argument("--sentence-beam", type=int, default=40)
    p.add_argument("--mmi-signatures", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--mmi-sentences", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("eval-diversity", help="diversity report for a candidate set (JSON)")
    p.add_argument("--candidates", required=True, help="one candidate sentence per line")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval_diversity)

    p = sub.add_parser("eval-sts", help="rank correlations against human scores (TSV)")
    p.add_argument("--pairs", required=True, help="TSV of index-a, index-b, score")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--widths", required=True, help="comma-separated signature widths")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval_sts)

    return parser


def dispatch(argv: list[str]) -> int:
    """Run one invocation; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    args._parser = parser
    try:
        return args.func(args)
    except SystemExit as exc:  # parser.error() inside a handler
        return exc.code if isinstance(exc.code, int) else 2
    except (Cod3sError, ValueError, OSError) as exc:
        print(f"cod3s {args.subcommand}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
