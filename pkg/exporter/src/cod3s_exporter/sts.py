"""Semantic-textual-similarity benchmark export.

Reads the published benchmark TSV layout (genre, file, year, id, score,
sentence-a, sentence-b; extra trailing columns tolerated), deduplicates
sentences, and emits the toolkit's pairs TSV plus one embedding file
covering every distinct sentence.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .codemb import write_embeddings
from .encoders import DEFAULT_ENCODER, load_encoder
from .export import write_meta


@dataclass
class StsRows:
    pairs: list[tuple[int, int, float]]
    sentences: list[str]
    skipped: int


def parse_benchmark(path: str | Path) -> StsRows:
    """Parse benchmark rows into index pairs over deduplicated sentences.

    Malformed rows (wrong column count, non-numeric or out-of-range
    score, empty sentence) are skipped and counted, not fatal.
    """
    sentences: list[str] = []
    positions: dict[str, int] = {}
    pairs: list[tuple[int, int, float]] = []
    skipped = 0

    def intern(sentence: str) -> int:
        if sentence not in positions:
            positions[sentence] = len(sentences)
            sentences.append(sentence)
        return positions[sentence]

    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) < 7:
            skipped += 1
            continue
        score_text, sent_a, sent_b = parts[4], parts[5].strip(), parts[6].strip()
        try:
            score = float(score_text)
        except ValueError:
            skipped += 1
            continue
        if not (0.0 <= score <= 5.0) or not sent_a or not sent_b:
            skipped += 1
            continue
        pairs.append((intern(sent_a), intern(sent_b), score))
    return StsRows(pairs=pairs, sentences=sentences, skipped=skipped)


def export_sts(
    dataset_path: str | Path,
    output_prefix: str | Path,
    encoder_name: str = DEFAULT_ENCODER,
    batch_size: int = 32,
) -> StsRows:
    """Emit <prefix>.pairs.tsv and <prefix>.emb (+ sidecar, meta)."""
    rows = parse_benchmark(dataset_path)
    prefix = Path(output_prefix)
    pairs_path = Path(str(prefix) + ".pairs.tsv")
    pairs_path.write_text(
        "".join(f"{a}\t{b}\t{score}\n" for a, b, score in rows.pairs), encoding="utf-8"
    )
    encoder = load_encoder(encoder_name, batch_size=batch_size)
    vectors = encoder.encode(rows.sentences)
    if vectors.shape[0] == 0:
        vectors = vectors.reshape(0, encoder.dim)
    emb_path = Path(str(prefix) + ".emb")
    write_embeddings(vectors, rows.sentences, emb_path)
    write_meta(
        emb_path,
        encoder.name,
        {"pairs": len(rows.pairs), "skipped_rows": rows.skipped, "source": str(dataset_path)},
    )
    return rows
