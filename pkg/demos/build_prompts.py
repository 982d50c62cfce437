"""Prompt construction walkthrough: one bundle, all four prompt kinds.

Builds a small mixed-content feature bundle by hand, then prints the flat
reasoning prompt, the two caption-style prompts, and the agent selection
prompt. Everything is deterministic; rendering the same bundle twice yields
identical bytes.

    python3 demos/build_prompts.py
"""

from __future__ import annotations

from symaudio.model import (
    ClipMetadata,
    EventTag,
    FeatureBundle,
    NoteEvent,
    Provenance,
    TranscriptSegment,
)
from symaudio.prompts import (
    Question,
    build_agent_selection_prompt,
    build_caption_prompt,
    build_caption_reasoning_prompt,
    build_flat_prompt,
)


def make_bundle() -> FeatureBundle:
    layers = {
        "events": [
            EventTag("Doorbell", 0.5, 1.2, 0.85),
            EventTag("Speech", 1.5, 6.0, 0.92),
            EventTag("Music", 6.2, 9.8, 0.74),
        ],
        "transcript": [
            TranscriptSegment("who could that be at this hour", 1.8, 3.4, "spk0"),
            TranscriptSegment("i will get the door", 3.9, 5.2, "spk1"),
        ],
        "notes": [NoteEvent(69, 6.4, 7.1), NoteEvent(72, 7.1, 7.9)],
    }
    prov = {name: Provenance(f"demo-{name}", "1") for name in layers}
    return FeatureBundle(
        metadata=ClipMetadata("front-door", 10.0, 16000),
        extractor_provenance=prov,
        **layers,
    )


def banner(title: str) -> None:
    print(f"\n{'=' * 12} {title} {'=' * 12}")


def main() -> int:
    bundle = make_bundle()
    question = Question(
        text="What happens right after the doorbell?",
        options=("Someone speaks", "Music starts", "A dog barks"),
        category="mixed",
    )

    flat = build_flat_prompt(bundle, question)
    banner(f"flat prompt (style={flat.style})")
    print(flat.text)

    caption = build_caption_prompt(bundle)
    banner("caption stage 1 (features to prose)")
    print(caption.text)

    stage2 = build_caption_reasoning_prompt(
        "A doorbell rings, two people talk, then melodic music plays.", question
    )
    banner("caption stage 2 (prose to answer)")
    print(stage2.text)

    selection = build_agent_selection_prompt(question, bundle)
    banner("agent layer selection")
    print(selection.text)

    banner("feature manifest of the flat prompt")
    for layer, count in flat.feature_manifest:
        print(f"{layer}: {count} line(s)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
