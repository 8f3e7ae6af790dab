"""Embedding exporter: turns sentence lists and similarity benchmarks
into the toolkit's binary embedding files via a pretrained encoder."""

from .codemb import write_embeddings
from .encoders import DEFAULT_ENCODER, StubEncoder, TransformerEncoder, load_encoder
from .export import ExportJob, export_sentences
from .sts import StsRows, export_sts, parse_benchmark

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_ENCODER",
    "ExportJob",
    "StsRows",
    "StubEncoder",
    "TransformerEncoder",
    "export_sentences",
    "export_sts",
    "load_encoder",
    "parse_benchmark",
    "write_embeddings",
]
