"""Export jobs: sentence lists and template-completed causal phrases."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .codemb import write_embeddings
from .encoders import DEFAULT_ENCODER, load_encoder

TEMPLATES = {
    "because": "{x} because {y}",
    "so": "{x}, so {y}",
}


@dataclass
class ExportJob:
    input_path: str | Path
    output_path: str | Path
    encoder: str = DEFAULT_ENCODER
    template: str | None = None  # None, "because", or "so"
    batch_size: int = 32

    def __post_init__(self):
        if self.template is not None and self.template not in TEMPLATES:
            raise ValueError(f"template must be one of {sorted(TEMPLATES)} or None")


def write_meta(output_path: str | Path, encoder_name: str, extra: dict | None = None) -> None:
    """Record the resolved checkpoint next to the artifact (the sidecar
    itself must stay strictly one-sentence-per-line)."""
    meta = {"encoder": encoder_name}
    meta.update(extra or {})
    Path(str(output_path) + ".meta.json").write_text(
        json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def read_sentences(path: str | Path, template: str | None) -> list[str]:
    lines = [
        line for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()
    ]
    if template is None:
        return lines
    pattern = TEMPLATES[template]
    phrases = []
    for lineno, line in enumerate(lines, 1):
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(
                f"{path}:{lineno}: template mode expects two tab-separated phrases"
            )
        phrases.append(pattern.format(x=parts[0].strip(), y=parts[1].strip()))
    return phrases


def export_sentences(job: ExportJob) -> int:
    """Embed one sentence (or joined phrase) per input line; returns the row count."""
    sentences = read_sentences(job.input_path, job.template)
    encoder = load_encoder(job.encoder, batch_size=job.batch_size)
    vectors = encoder.encode(sentences)
    if vectors.shape[0] == 0:
        vectors = vectors.reshape(0, encoder.dim)
    write_embeddings(vectors, sentences, job.output_path)
    write_meta(job.output_path, encoder.name, {"template": job.template, "count": len(sentences)})
    return len(sentences)
