"""Two-stage diverse decoding over semantic signatures.

Stage one ranks signature candidates by forward score plus a
lambda-weighted backward (source-given-signature) score, then greedily
keeps the highest-ranked signatures whose pairwise Hamming distance
stays strictly above a threshold. Stage two decodes one sentence per
kept signature the same way with its own lambda. The threshold is the
diversity contract: when fewer than k signatures survive it, the
smaller set is returned rather than relaxing the distance.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple

from .errors import NotFoundError
from .lsh import Signature, hamming_distance
from .scoring import Gateway, ScoredCandidate, ScorerConfig, resolve_gateway, with_backward


@dataclass
class PipelineConfig:
    """Knobs for the two-stage decode; defaults are the 16-bit operating point."""

    k: int
    lambda_s: float = 1000.0
    lambda_y: float = 0.3
    hamming_threshold: int = 2
    mmi_signatures: bool = True
    mmi_sentences: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.lambda_s < 0 or self.lambda_y < 0:
            raise ValueError("lambda weights must be non-negative")
        if self.hamming_threshold < 0:
            raise ValueError("hamming threshold must be non-negative")


class Pick(NamedTuple):
    """One decoded output. Forward log-probabilities ride along so either
    the combined-score or the forward-only ordering can be reconstructed."""

    signature: Signature
    sentence: str
    signature_score: float
    sentence_score: float
    signature_forward_logprob: float
    sentence_forward_logprob: float


@dataclass
class DiverseOutputs:
    """Picks for one source, ordered by signature rank; ``gaps`` lists kept
    signatures for which no sentence could be decoded."""

    source: str
    picks: list[Pick] = field(default_factory=list)
    gaps: list[Signature] = field(default_factory=list)


def mmi_rerank(candidates: list[ScoredCandidate], lam: float) -> list[ScoredCandidate]:
    """Sort by forward + lam * backward, descending; stable for equal scores.

    With lam == 0 backward scores are not required and the result is the
    forward-only ranking.
    """
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    rescored = []
    for cand in candidates:
        if lam > 0:
            if cand.backward_logprob is None:
                raise ValueError(f"candidate {cand.text!r} lacks a backward score")
            combined = cand.forward_logprob + lam * cand.backward_logprob
        else:
            combined = cand.forward_logprob
        rescored.append(replace(cand, combined_logprob=combined))
    return sorted(rescored, key=lambda c: -c.combined_logprob)


def greedy_hamming_filter(
    ranked: list[ScoredCandidate], t: int, k: int
) -> list[ScoredCandidate]:
    """Scan best-first, keeping signatures farther than t from everything kept.

    Stops after k keeps; the result preserves rank order and satisfies
    min pairwise Hamming distance > t.
    """
    if t < 0:
        raise ValueError("threshold must be non-negative")
    if k < 1:
        raise ValueError("k must be >= 1")
    widths = {c.payload.bits for c in ranked if isinstance(c.payload, Signature)}
    if len(widths) > 1:
        raise ValueError(f"mixed signature widths: {sorted(widths)}")
    if any(not isinstance(c.payload, Signature) for c in ranked):
        raise ValueError("greedy filter expects signature payloads")
    kept: list[ScoredCandidate] = []
    for cand in ranked:
        if all(hamming_distance(cand.payload, prior.payload) > t for prior in kept):
            kept.append(cand)
            if len(kept) == k:
                break
    return kept


def decode_signatures(
    source: str, cfg: PipelineConfig, scorer: ScorerConfig | Gateway
) -> list[ScoredCandidate]:
    """Stage one: forward n-best, optional MMI rerank, greedy Hamming filter."""
    gateway, owned = resolve_gateway(scorer)
    try:
        candidates = gateway.forward_signatures(source)
        lam = cfg.lambda_s if cfg.mmi_signatures else 0.0
        if lam > 0:  # backward scores only matter (and are only fetched) when weighted
            candidates = with_backward(candidates, source, gateway)
        ranked = mmi_rerank(candidates, lam)
        return greedy_hamming_filter(ranked, cfg.hamming_threshold, cfg.k)
    finally:
        if owned:
            gateway.close()


def decode_sentences(
    source: str, signature: Signature, cfg: PipelineConfig, scorer: ScorerConfig | Gateway
) -> ScoredCandidate:
    """Stage two: best sentence for one signature under the MMI objective."""
    gateway, owned = resolve_gateway(scorer)
    try:
        candidates = gateway.forward_sentences(source, signature)
        if not candidates:
            raise NotFoundError(f"no sentence candidates for signature {signature}")
        lam = cfg.lambda_y if cfg.mmi_sentences else 0.0
        if lam > 0:
            candidates = with_backward(candidates, source, gateway)
        return mmi_rerank(candidates, lam)[0]
    finally:
        if owned:
            gateway.close()


def run_pipeline(
    source: str,
    cfg: PipelineConfig,
    scorer: ScorerConfig | Gateway,
    jobs: int = 1,
) -> DiverseOutputs:
    """Both stages end to end for one source.

    Per-signature sentence decodes run in parallel when jobs > 1 and the
    gateway is safe for concurrent reads (fixture and ngram backends); a
    process channel is strictly sequential, so it decodes in rank order.
    Signatures whose sentence decode finds nothing are recorded as gaps.
    """
    gateway, owned = resolve_gateway(scorer)
    try:
        kept = decode_signatures(source, cfg, gateway)

        def decode_one(sig_cand: ScoredCandidate) -> ScoredCandidate | None:
            try:
                return decode_sentences(source, sig_cand.payload, cfg, gateway)
            except NotFoundError:
                return None

        if jobs > 1 and gateway.concurrent_safe and len(kept) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                decoded = list(pool.map(decode_one, kept))
        else:
            decoded = [decode_one(c) for c in kept]

        outputs = DiverseOutputs(source=source)
        for sig_cand, sent_cand in zip(kept, decoded):
            if sent_cand is None:
                outputs.gaps.append(sig_cand.payload)
                continue
            outputs.picks.append(
                Pick(
                    signature=sig_cand.payload,
                    sentence=sent_cand.payload,
                    signature_score=sig_cand.combined_logprob,
                    sentence_score=sent_cand.combined_logprob,
                    signature_forward_logprob=sig_cand.forward_logprob,
                    sentence_forward_logprob=sent_cand.forward_logprob,
                )
            )
        return outputs
    finally:
        if owned:
            gateway.close()
