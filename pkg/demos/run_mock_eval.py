"""Batch evaluation walkthrough with scripted responders, no network.

Builds a 12-sample synthetic benchmark in memory, evaluates it twice (a
gold-oracle responder that always answers correctly, then a gibberish one
that never parses), and prints both score tables. Also demonstrates resume:
rerunning against an existing results file issues no further requests.

    python3 demos/run_mock_eval.py
"""

from __future__ import annotations

import tempfile
from pathlib import Path

from symaudio.bench.loaders import QASample
from symaudio.bench.runner import run_eval
from symaudio.bench.scoring import render_markdown, score
from symaudio.llm import EndpointConfig, LlmClient
from symaudio.model import (
    ClipMetadata,
    EventTag,
    FeatureBundle,
    Provenance,
    TranscriptSegment,
)
from symaudio.prompts import Question
from symaudio.testing import GibberishTransport, GoldOracleTransport

LETTERS = "ABCD"


def make_samples(n: int = 12) -> list[QASample]:
    samples = []
    for i in range(n):
        options = tuple(f"Outcome {c} of case {i}" for c in LETTERS)
        samples.append(
            QASample(
                sample_id=f"s{i:03d}",
                clip_ref=f"clip-{i}",
                question=Question(
                    text=f"Scenario {i}: what is heard?",
                    options=options,
                    category=("sound", "music", "speech")[i % 3],
                ),
                gold_index=i % len(LETTERS),
                benchmark="custom",
            )
        )
    return samples


def bundle_for(sample: QASample) -> FeatureBundle:
    layers = {
        "events": [EventTag("Speech", 0.0, 5.0, 0.9)],
        "transcript": [TranscriptSegment("and then it happened", 0.4, 2.1)],
    }
    prov = {name: Provenance(f"demo-{name}", "1") for name in layers}
    return FeatureBundle(
        metadata=ClipMetadata(sample.clip_ref, 6.0, 16000),
        extractor_provenance=prov,
        **layers,
    )


def client_for(transport) -> LlmClient:
    return LlmClient(EndpointConfig(), transport=transport)


def main() -> int:
    samples = make_samples()
    gold = {s.question.text: LETTERS[s.gold_index] for s in samples}

    transport = GoldOracleTransport(gold)
    results = run_eval(samples, client_for(transport), bundle_for, style="flat")
    print(render_markdown(score(results, samples), title="Gold oracle, flat style"))
    print(f"(transport calls: {transport.calls})\n")

    results = run_eval(samples, client_for(GibberishTransport()), bundle_for)
    print(render_markdown(score(results, samples), title="Gibberish responder"))

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "results.jsonl"
        first = GoldOracleTransport(gold)
        run_eval(samples, client_for(first), bundle_for, results_path=path)
        again = GoldOracleTransport(gold)
        run_eval(samples, client_for(again), bundle_for, results_path=path)
        print(f"\nresume: first pass made {first.calls} requests, "
              f"rerun with the same results file made {again.calls}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
