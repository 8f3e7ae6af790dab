"""Locality-sensitive semantic sentence codes.

Discretizes sentence embeddings into b-bit signatures whose Hamming
distances track embedding cosine distances, organizes corpora into the
resulting hierarchy of semantic bins, drives two-stage diverse decoding
(signature selection, then prefix-conditioned sentence selection, both
with mutual-information reranking), and evaluates output diversity.
"""

from .bins import BinIndex, BinStats, bin_medoid, bin_stats, build_index, query_prefix
from .decoding import (
    DiverseOutputs,
    Pick,
    PipelineConfig,
    decode_sentences,
    decode_signatures,
    greedy_hamming_filter,
    mmi_rerank,
    run_pipeline,
)
from .diversity import (
    DiversityReport,
    DuplicateEntry,
    StsTable,
    count_distinct,
    diversity_report,
    pairwise_diversity,
    sentence_bleu,
    spearman_rho,
    sts_eval,
)
from .embeddings import (
    EmbeddingMatrix,
    cosine_distance,
    cosine_similarity,
    load_embeddings,
    save_embeddings,
)
from .errors import AlignmentError, Cod3sError, FormatError, GatewayError, NotFoundError
from .lsh import (
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
from .scoring import (
    FixtureGateway,
    NgramGateway,
    ProcessGateway,
    ScoredCandidate,
    ScorerConfig,
    backward_score,
    forward_sentences,
    forward_signatures,
    open_gateway,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "BinIndex",
    "BinStats",
    "Cod3sError",
    "DiverseOutputs",
    "DiversityReport",
    "DuplicateEntry",
    "EmbeddingMatrix",
    "FixtureGateway",
    "FormatError",
    "GatewayError",
    "HyperplaneSet",
    "NgramGateway",
    "NotFoundError",
    "Pick",
    "PipelineConfig",
    "ProcessGateway",
    "ScoredCandidate",
    "ScorerConfig",
    "Signature",
    "StsTable",
    "approx_cosine",
    "backward_score",
    "bin_medoid",
    "bin_stats",
    "build_index",
    "cosine_distance",
    "cosine_similarity",
    "count_distinct",
    "decode_sentences",
    "decode_signatures",
    "diversity_report",
    "forward_sentences",
    "forward_signatures",
    "generate_hyperplanes",
    "greedy_hamming_filter",
    "hamming_distance",
    "hash_corpus",
    "hash_vector",
    "load_embeddings",
    "load_hyperplanes",
    "mmi_rerank",
    "open_gateway",
    "pairwise_diversity",
    "query_prefix",
    "run_pipeline",
    "save_embeddings",
    "save_hyperplanes",
    "sentence_bleu",
    "spearman_rho",
    "sts_eval",
]
