"""Uniform access to forward and backward sequence scorers.

Three interchangeable backends supply the probabilities consumed by the
decode pipeline:

* ``fixture`` -- a JSON-lines file of canned replies, one object per
  key: ``{"op": "fwd_sig", "source": ..., "candidates": [...]}``,
  ``{"op": "fwd_sent", "source": ..., "signature": ..., "candidates":
  [...]}`` or ``{"op": "bwd", "source": ..., "payload": ...,
  "logprob": ...}``. Candidates are ``{"payload": ..., "logprob": ...}``.
* ``process`` -- an external scorer spoken to over line-delimited JSON
  on its stdin/stdout, one request object per line, LF-terminated,
  using the same shapes as the fixture entries (requests carry a
  ``beam`` field instead of ``candidates``). One request is in flight
  at a time per child.
* ``ngram`` -- a built-in interpolated bigram scorer trained from a TSV
  of (source, signature, target) triples, for hermetic end-to-end runs.

All log-probabilities are natural-log and length-normalized; signatures
cross every boundary as '0'/'1' strings and are scored by the builtin
model as one token per bit.
"""

from __future__ import annotations

import json
import math
import shlex
import subprocess
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import FormatError, GatewayError, NotFoundError
from .lsh import Signature

Payload = Signature | str


@dataclass(frozen=True)
class ScoredCandidate:
    """A signature or sentence with its scores for MMI reranking."""

    payload: Payload
    forward_logprob: float
    backward_logprob: float | None = None
    combined_logprob: float | None = None

    def __post_init__(self):
        for name in ("forward_logprob", "backward_logprob"):
            value = getattr(self, name)
            if value is None:
                continue
            if not math.isfinite(value) or value > 0.0:
                raise ValueError(f"{name} must be finite and <= 0, got {value}")

    @property
    def text(self) -> str:
        """External '0'/'1' or sentence form of the payload."""
        return str(self.payload)


@dataclass
class ScorerConfig:
    """Backend selection plus n-best list sizes.

    ``endpoint`` is the fixture path, training TSV path, or scorer
    command line depending on ``mode``. Process mode additionally
    accepts per-operation command lines (two forward scorers, or a
    separate backward one); children are shared between operations that
    resolve to the same command.
    """

    mode: str
    signature_beam: int = 100
    sentence_beam: int = 40
    endpoint: str | Path | None = None
    fwd_sig_endpoint: str | Path | None = None
    fwd_sent_endpoint: str | Path | None = None
    bwd_endpoint: str | Path | None = None

    def __post_init__(self):
        if self.mode not in ("fixture", "process", "ngram"):
            raise ValueError(f"unknown scorer mode {self.mode!r}")
        if self.signature_beam < 1 or self.sentence_beam < 1:
            raise ValueError("beam sizes must be >= 1")
        if self.mode != "process" and (
            self.fwd_sig_endpoint or self.fwd_sent_endpoint or self.bwd_endpoint
        ):
            raise ValueError("per-operation endpoints are only supported in process mode")


def _finalize(candidates: list[ScoredCandidate], beam: int) -> list[ScoredCandidate]:
    """Sort by forward score (descending, stable), drop repeated payloads, truncate."""
    ranked = sorted(candidates, key=lambda c: -c.forward_logprob)
    seen: set[str] = set()
    out = []
    for cand in ranked:
        if cand.text in seen:
            continue
        seen.add(cand.text)
        out.append(cand)
        if len(out) == beam:
            break
    return out


class FixtureGateway:
    """Replays canned scorer replies from a JSON-lines file."""

    concurrent_safe = True

    def __init__(self, cfg: ScorerConfig):
        if cfg.endpoint is None:
            raise ValueError("fixture mode needs an endpoint path")
        self.cfg = cfg
        self._fwd_sig: dict[str, list[dict]] = {}
        self._fwd_sent: dict[tuple[str, str], list[dict]] = {}
        self._bwd: dict[tuple[str, str], float] = {}
        path = Path(cfg.endpoint)
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
                op = entry["op"]
                if op == "fwd_sig":
                    self._fwd_sig[entry["source"]] = entry["candidates"]
                elif op == "fwd_sent":
                    key = (entry["source"], entry["signature"])
                    self._fwd_sent[key] = entry["candidates"]
                elif op == "bwd":
                    self._bwd[(entry["source"], entry["payload"])] = float(entry["logprob"])
                else:
                    raise KeyError(op)
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}:{lineno}: malformed fixture entry ({exc})") from exc

    def forward_signatures(self, source: str) -> list[ScoredCandidate]:
        _require_source(source)
        if source not in self._fwd_sig:
            raise NotFoundError(f"no signature fixture for source {source!r}")
        cands = [
            ScoredCandidate(Signature.from_string(c["payload"]), float(c["logprob"]))
            for c in self._fwd_sig[source]
        ]
        return _finalize(cands, self.cfg.signature_beam)

    def forward_sentences(self, source: str, signature: Signature) -> list[ScoredCandidate]:
        _require_source(source)
        key = (source, str(signature))
        if key not in self._fwd_sent:
            raise NotFoundError(f"no sentence fixture for {key!r}")
        cands = [
            ScoredCandidate(str(c["payload"]), float(c["logprob"]))
            for c in self._fwd_sent[key]
        ]
        return _finalize(cands, self.cfg.sentence_beam)

    def backward_score(self, source: str, payload: Payload) -> float:
        _require_source(source)
        key = (source, str(payload))
        if key not in self._bwd:
            raise NotFoundError(f"no backward fixture for {key!r}")
        return self._bwd[key]

    def close(self):
        pass


class ProcessGateway:
    """Drives external scorer processes over the line protocol.

    Children are spawned lazily per distinct command line and kept for
    the gateway's lifetime; requests on one child are strictly
    sequential.
    """

    concurrent_safe = False

    def __init__(self, cfg: ScorerConfig):
        self.cfg = cfg
        self._commands = {
            "fwd_sig": str(cfg.fwd_sig_endpoint or cfg.endpoint or ""),
            "fwd_sent": str(cfg.fwd_sent_endpoint or cfg.endpoint or ""),
            "bwd": str(cfg.bwd_endpoint or cfg.endpoint or ""),
        }
        if not all(self._commands.values()):
            raise ValueError("process mode needs a scorer command line")
        self._children: dict[str, subprocess.Popen] = {}

    def _child(self, op: str) -> subprocess.Popen:
        command = self._commands[op]
        child = self._children.get(command)
        if child is None or child.poll() is not None:
            child = subprocess.Popen(
                shlex.split(command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
            )
            self._children[command] = child
        return child

    def _request(self, op: str, request: dict) -> dict:
        child = self._child(op)
        raw = ""
        try:
            child.stdin.write(json.dumps(request) + "\n")
            child.stdin.flush()
            raw = child.stdout.readline()
        except (BrokenPipeError, OSError) as exc:
            raise GatewayError(f"scorer process died mid-request: {exc}", raw) from exc
        if not raw:
            code = child.poll()
            raise GatewayError(f"scorer process closed its output (exit status {code})", raw)
        try:
            reply = json.loads(raw)
            if not isinstance(reply, dict):
                raise TypeError("reply is not an object")
            return reply
        except (json.JSONDecodeError, TypeError) as exc:
            raise GatewayError(f"unparseable scorer reply: {exc}", raw) from exc

    def _candidates(self, op: str, request: dict, beam: int, as_signature: bool):
        reply = self._request(op, request)
        try:
            cands = [
                ScoredCandidate(
                    Signature.from_string(c["payload"]) if as_signature else str(c["payload"]),
                    float(c["logprob"]),
                )
                for c in reply["candidates"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise GatewayError(f"malformed candidate list: {exc}", json.dumps(reply)) from exc
        return _finalize(cands, beam)

    def forward_signatures(self, source: str) -> list[ScoredCandidate]:
        _require_source(source)
        request = {"op": "fwd_sig", "source": source, "beam": self.cfg.signature_beam}
        return self._candidates("fwd_sig", request, self.cfg.signature_beam, True)

    def forward_sentences(self, source: str, signature: Signature) -> list[ScoredCandidate]:
        _require_source(source)
        request = {
            "op": "fwd_sent",
            "source": source,
            "signature": str(signature),
            "beam": self.cfg.sentence_beam,
        }
        return self._candidates("fwd_sent", request, self.cfg.sentence_beam, False)

    def backward_score(self, source: str, payload: Payload) -> float:
        _require_source(source)
        reply = self._request("bwd", {"op": "bwd", "source": source, "payload": str(payload)})
        try:
            logprob = float(reply["logprob"])
            if not math.isfinite(logprob) or logprob > 0.0:
                raise ValueError(f"logprob {logprob} out of range")
        except (KeyError, TypeError, ValueError) as exc:
            raise GatewayError(f"malformed backward reply: {exc}", json.dumps(reply)) from exc
        return logprob

    def close(self):
        for child in self._children.values():
            if child.stdin:
                child.stdin.close()
            child.terminate()
            child.wait()
        self._children.clear()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


_BOS, _SEP, _EOS, _UNK = "<s>", "<sep>", "</s>", "<unk>"


class _BigramTable:
    """Add-0.1 smoothed bigram/unigram counts over one sequence direction.

    Conditional probabilities interpolate the smoothed bigram and
    unigram estimates with equal weight, so they sum to one over the
    vocabulary for every conditioning context.
    """

    SMOOTHING = 0.1
    BIGRAM_WEIGHT = 0.5

    def __init__(self, vocab: set[str]):
        self.vocab = vocab
        self.unigrams: Counter = Counter()
        self.bigrams: Counter = Counter()
        self.contexts: Counter = Counter()
        self.total = 0

    def observe(self, tokens: list[str]):
        for tok in tokens:
            self.unigrams[tok] += 1
            self.total += 1
        for prev, tok in zip(tokens, tokens[1:]):
            self.bigrams[(prev, tok)] += 1
            self.contexts[prev] += 1

    def prob(self, token: str, prev: str) -> float:
        token = token if token in self.vocab else _UNK
        prev = prev if prev in self.vocab else _UNK
        k, v = self.SMOOTHING, len(self.vocab)
        p_bi = (self.bigrams[(prev, token)] + k) / (self.contexts[prev] + k * v)
        p_uni = (self.unigrams[token] + k) / (self.total + k * v)
        return self.BIGRAM_WEIGHT * p_bi + (1.0 - self.BIGRAM_WEIGHT) * p_uni

    def chain_logprob(self, context: list[str], scored: list[str]) -> float:
        """Length-normalized sum of log p(token | previous token)."""
        logprob = 0.0
        prev = context[-1]
        for tok in scored:
            logprob += math.log(self.prob(tok, prev))
            prev = tok
        return logprob / len(scored)


class NgramGateway:
    """Hermetic reference scorer: interpolated bigram chains over training triples.

    The forward table is trained on ``<s> source <sep> signature-bits
    <sep> target </s>`` sequences, the backward table on ``<s> payload
    <sep> source </s>`` for both payload kinds. Sentences are split on
    whitespace; signatures contribute one token per bit. Candidates are
    the distinct signatures (resp. targets) of the training file in
    first-seen order, rescored per source.
    """

    concurrent_safe = True

    def __init__(self, cfg: ScorerConfig):
        if cfg.endpoint is None:
            raise ValueError("ngram mode needs a training TSV path")
        self.cfg = cfg
        path = Path(cfg.endpoint)
        triples = []
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError(f"{path}:{lineno}: expected 3 tab-separated fields")
            triples.append(parts)
        if not triples:
            raise FormatError(f"{path}: no training triples")

        vocab = {_BOS, _SEP, _EOS, _UNK}
        for source, signature, target in triples:
            vocab.update(source.split(), signature, target.split())
        self._forward = _BigramTable(vocab)
        self._backward = _BigramTable(vocab)
        self._signatures: list[Signature] = []
        self._targets: list[str] = []
        seen_sigs: set[str] = set()
        seen_tgts: set[str] = set()
        for source, signature, target in triples:
            src, sig, tgt = source.split(), list(signature), target.split()
            self._forward.observe([_BOS] + src + [_SEP] + sig + [_SEP] + tgt + [_EOS])
            self._backward.observe([_BOS] + sig + [_SEP] + src + [_EOS])
            self._backward.observe([_BOS] + tgt + [_SEP] + src + [_EOS])
            if signature not in seen_sigs:
                seen_sigs.add(signature)
                self._signatures.append(Signature.from_string(signature))
            if target not in seen_tgts:
                seen_tgts.add(target)
                self._targets.append(target)

    def forward_signatures(self, source: str) -> list[ScoredCandidate]:
        _require_source(source)
        context = [_BOS] + source.split() + [_SEP]
        cands = [
            ScoredCandidate(sig, self._forward.chain_logprob(context, list(str(sig))))
            for sig in self._signatures
        ]
        return _finalize(cands, self.cfg.signature_beam)

    def forward_sentences(self, source: str, signature: Signature) -> list[ScoredCandidate]:
        _require_source(source)
        context = [_BOS] + source.split() + [_SEP] + list(str(signature)) + [_SEP]
        cands = [
            ScoredCandidate(tgt, self._forward.chain_logprob(context, tgt.split() + [_EOS]))
            for tgt in self._targets
        ]
        return _finalize(cands, self.cfg.sentence_beam)

    def backward_score(self, source: str, payload: Payload) -> float:
        _require_source(source)
        tokens = list(str(payload)) if isinstance(payload, Signature) else str(payload).split()
        context = [_BOS] + tokens + [_SEP]
        return self._backward.chain_logprob(context, source.split() + [_EOS])

    def close(self):
        pass


def _require_source(source: str):
    if not source:
        raise ValueError("source sentence must be nonempty")


_GATEWAYS = {"fixture": FixtureGateway, "process": ProcessGateway, "ngram": NgramGateway}

Gateway = FixtureGateway | ProcessGateway | NgramGateway


def open_gateway(cfg: ScorerConfig) -> Gateway:
    return _GATEWAYS[cfg.mode](cfg)


def resolve_gateway(scorer: ScorerConfig | Gateway) -> tuple[Gateway, bool]:
    if isinstance(scorer, ScorerConfig):
        return open_gateway(scorer), True
    return scorer, False


def forward_signatures(source: str, cfg: ScorerConfig | Gateway) -> list[ScoredCandidate]:
    """Top signature candidates for a source, best forward score first."""
    gateway, owned = resolve_gateway(cfg)
    try:
        return gateway.forward_signatures(source)
    finally:
        if owned:
            gateway.close()


def forward_sentences(
    source: str, signature: Signature, cfg: ScorerConfig | Gateway
) -> list[ScoredCandidate]:
    """Top sentence candidates conditioned on a signature, best first."""
    gateway, owned = resolve_gateway(cfg)
    try:
        return gateway.forward_sentences(source, signature)
    finally:
        if owned:
            gateway.close()


def backward_score(source: str, payload: Payload, cfg: ScorerConfig | Gateway) -> float:
    """Length-normalized log-probability of the source given a candidate."""
    gateway, owned = resolve_gateway(cfg)
    try:
        return gateway.backward_score(source, payload)
    finally:
        if owned:
            gateway.close()


def with_backward(
    candidates: list[ScoredCandidate], source: str, gateway: Gateway
) -> list[ScoredCandidate]:
    """Attach backward scores to an n-best list (fetched lazily, list order kept)."""
    return [
        replace(c, backward_logprob=gateway.backward_score(source, c.payload))
        for c in candidates
    ]
