"""Two-stage diverse decoding, step by step.

Part one drives the pipeline from a hand-written fixture so every score
is visible: backward scores flip the signature ranking (MMI), and the
Hamming threshold then throws out a near-duplicate bin. Part two runs
the same pipeline hermetically on the builtin bigram scorer.
"""

import json
import tempfile
from pathlib import Path

from cod3s import PipelineConfig, ScorerConfig, run_pipeline

SOURCE = "my favorite song came on the radio"

# Four candidate bins: two nearly identical codes (1 bit apart), two far away.
# Forward scores favor the near-duplicates; backward scores favor bin C.
SIGS = {
    "A": ("0000110011001010", -0.10, -2.00),
    "B": ("0000110011001000", -0.12, -2.10),  # 1 bit from A
    "C": ("1111001100110101", -0.60, -0.20),
    "D": ("1010101000001111", -0.80, -2.30),
}
SENTENCES = {
    "A": [("i turned up the volume", -0.3, -1.0), ("i cranked it up", -0.5, -0.4)],
    "B": [("i turned the volume up", -0.3, -1.0)],
    "C": [("i started to sing along", -0.4, -0.6)],
    "D": [("i thought of an old friend", -0.4, -0.9)],
}


def write_fixture(path):
    lines = [
        {
            "op": "fwd_sig",
            "source": SOURCE,
            "candidates": [
                {"payload": sig, "logprob": fwd} for sig, fwd, _ in SIGS.values()
            ],
        }
    ]
    for sig, _, bwd in SIGS.values():
        lines.append({"op": "bwd", "source": SOURCE, "payload": sig, "logprob": bwd})
    for label, (sig, _, _) in SIGS.items():
        lines.append(
            {
                "op": "fwd_sent",
                "source": SOURCE,
                "signature": sig,
                "candidates": [
                    {"payload": text, "logprob": fwd} for text, fwd, _ in SENTENCES[label]
                ],
            }
        )
        for text, _, bwd in SENTENCES[label]:
            lines.append({"op": "bwd", "source": SOURCE, "payload": text, "logprob": bwd})
    path.write_text("".join(json.dumps(e) + "\n" for e in lines), encoding="utf-8")


with tempfile.TemporaryDirectory() as tmp:
    fixture = Path(tmp) / "fixture.jsonl"
    write_fixture(fixture)
    scorer = ScorerConfig("fixture", endpoint=fixture)

    print(f"source: {SOURCE!r}\n")
    print("bin    forward  backward  fwd + 2.0*bwd")
    for label, (sig, fwd, bwd) in SIGS.items():
        print(f"{label} {sig}  {fwd:+.2f}  {bwd:+.2f}   {fwd + 2.0 * bwd:+.2f}")

    for mmi, t in ((False, 0), (True, 0), (True, 2)):
        cfg = PipelineConfig(
            k=3, lambda_s=2.0, lambda_y=0.3, hamming_threshold=t, mmi_signatures=mmi
        )
        outputs = run_pipeline(SOURCE, cfg, scorer)
        label = f"mmi={'on ' if mmi else 'off'} t={t}"
        print(f"\n== {label} ==")
        for pick in outputs.picks:
            print(f"  {pick.signature}  {pick.sentence!r}")

    print(
        "\nForward-only ranking keeps both near-duplicate bins (A, B). MMI pulls C\n"
        "to the top but A and B still both survive at t=0; t=2 drops B for\n"
        "sitting one bit away from A, letting D through instead."
    )

# ---------------------------------------------------------------------------

print("\n== hermetic run on the builtin bigram scorer ==")
TRIPLES = [
    (SOURCE, sig, text)
    for label, (sig, _, _) in SIGS.items()
    for text, _, _ in SENTENCES[label]
]
with tempfile.TemporaryDirectory() as tmp:
    train = Path(tmp) / "train.tsv"
    train.write_text("".join(f"{s}\t{g}\t{t}\n" for s, g, t in TRIPLES), encoding="utf-8")
    cfg = PipelineConfig(k=3, hamming_threshold=2, mmi_signatures=False, mmi_sentences=True)
    outputs = run_pipeline(SOURCE, cfg, ScorerConfig("ngram", endpoint=train))
    for pick in outputs.picks:
        print(f"  {pick.signature}  {pick.sentence!r}  (score {pick.sentence_score:.3f})")
print(
    "The bigram scorer needs no fixture files, but a bigram chain conditions on\n"
    "the signature only through adjacent tokens, so treat it as test plumbing."
)
