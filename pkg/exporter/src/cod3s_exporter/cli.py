"""Standalone exporter entry point.

``cod3s-export sentences`` embeds one sentence per input line (or a
template-joined phrase per tab-separated pair); ``cod3s-export sts``
converts a similarity benchmark split into the toolkit's pairs TSV plus
an embedding file over the distinct sentences.
"""

from __future__ import annotations

import argparse
import sys

from .encoders import DEFAULT_ENCODER
from .export import ExportJob, export_sentences
from .sts import export_sts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cod3s-export")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("sentences", help="embed a sentence list into a CODEMB1 file")
    p.add_argument("input", help="UTF-8 text, one sentence per line (pairs in template mode)")
    p.add_argument("-o", "--output", required=True, help="embedding file path (not .txt)")
    p.add_argument("--encoder", default=DEFAULT_ENCODER)
    p.add_argument("--template", choices=("because", "so"))
    p.add_argument("--batch-size", type=int, default=32)

    p = sub.add_parser("sts", help="export a similarity benchmark split")
    p.add_argument("dataset", help="benchmark TSV split")
    p.add_argument("-o", "--output-prefix", required=True)
    p.add_argument("--encoder", default=DEFAULT_ENCODER)
    p.add_argument("--batch-size", type=int, default=32)

    return parser


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        if args.subcommand == "sentences":
            job = ExportJob(
                input_path=args.input,
                output_path=args.output,
                encoder=args.encoder,
                template=args.template,
                batch_size=args.batch_size,
            )
            count = export_sentences(job)
            print(f"embedded {count} sentences -> {args.output}")
        else:
            rows = export_sts(
                args.dataset,
                args.output_prefix,
                encoder_name=args.encoder,
                batch_size=args.batch_size,
            )
            print(
                f"emitted {len(rows.pairs)} pairs over {len(rows.sentences)} distinct "
                f"sentences ({rows.skipped} malformed rows skipped)"
            )
        return 0
    except (ValueError, OSError) as exc:
        print(f"cod3s-export {args.subcommand}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
