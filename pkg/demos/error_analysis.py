"""Error attribution walkthrough: was it missing evidence or bad reasoning?

Builds two wrong answers to the same temporal-order question. In the first,
the feature bundle never contained two of the sounds the gold answer lists,
so the error is attributed to missing feature evidence. In the second, every
sound was present and the blame stays with the reasoning step.

    python3 demos/error_analysis.py
"""

from __future__ import annotations

from symaudio.bench.analysis import analyze_errors
from symaudio.bench.loaders import QASample
from symaudio.bench.runner import EvalResult
from symaudio.model import ClipMetadata, EventTag, FeatureBundle, Provenance
from symaudio.prompts import Question

QUESTION = Question(
    text="In what order do the sounds occur?",
    options=(
        "Doorbell, dog barking, glass breaking",
        "Dog barking, doorbell, glass breaking",
        "Glass breaking, doorbell, dog barking",
    ),
    category="sound",
)


def sample(sample_id: str) -> QASample:
    return QASample(
        sample_id=sample_id,
        clip_ref=sample_id,
        question=QUESTION,
        gold_index=0,
        benchmark="custom",
    )


def wrong_answer(sample_id: str) -> EvalResult:
    return EvalResult(
        sample_id=sample_id,
        predicted_index=1,
        correct=False,
        parse_error=False,
        raw_output="(B)",
        prompt_style="flat",
        included_layers=("events",),
    )


def bundle(sample_id: str, *labels: str) -> FeatureBundle:
    events = [EventTag(label, float(i), float(i) + 0.8, 0.9) for i, label in enumerate(labels)]
    return FeatureBundle(
        metadata=ClipMetadata(sample_id, 10.0, 16000),
        events=events,
        extractor_provenance={"events": Provenance("demo-events", "1")},
    )


def main() -> int:
    samples = [sample("sparse"), sample("complete")]
    results = [wrong_answer("sparse"), wrong_answer("complete")]
    bundles = {
        # The tagger only caught the barking; doorbell and glass are absent.
        "sparse": bundle("sparse", "Dog barking"),
        "complete": bundle("complete", "Doorbell", "Dog barking", "Glass breaking"),
    }

    report = analyze_errors(results, bundles, samples)
    for entry in report.entries:
        print(f"sample {entry.sample_id}: {entry.classification}")
        print(f"  gold items:    {', '.join(entry.gold_items)}")
        missing = ", ".join(entry.missing_items) if entry.missing_items else "(none)"
        print(f"  missing items: {missing}")

    print("\ncounts by classification:")
    for flag, count in sorted(report.by_flag.items()):
        print(f"  {flag}: {count}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
