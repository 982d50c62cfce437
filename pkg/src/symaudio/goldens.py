"""Representative fixtures that freeze the prompt templates.

Five bundles cover the interesting shapes: speech only, music only, mixed
content, an empty bundle, and a notes layer past the per-layer line cap.
Each renders in all four prompt styles; the resulting files under
fixtures/prompts/ are compared byte for byte in tests, so any template
change must regenerate them deliberately.
"""

from __future__ import annotations

from pathlib import Path

from symaudio.model import (
    ClipMetadata,
    ChordSegment,
    EmotionLabel,
    EventTag,
    FeatureBundle,
    MusicTag,
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

GOLDEN_KEYS = ("speech_only", "music_only", "mixed", "empty", "overflow")

STYLE_SUFFIXES = ("flat", "caption1", "caption2", "agent")


def _prov(*layers: str) -> dict[str, Provenance]:
    return {layer: Provenance(f"fixture-{layer}", "1") for layer in layers}


def _speech_only() -> FeatureBundle:
    return FeatureBundle(
        metadata=ClipMetadata("fixture-speech", 6.5, 16000),
        events=(EventTag("Speech", 0.0, 6.2, 0.92),),
        transcript=(
            TranscriptSegment("Could you check the kettle?", 0.2, 2.4, "spk0"),
            TranscriptSegment("It whistles every morning.", 2.9, 5.8, "spk1"),
        ),
        emotion=EmotionLabel(0.8, 0.7, 0.5, "excited"),
        extractor_provenance=_prov("events", "transcript", "emotion"),
    )


def _music_only() -> FeatureBundle:
    return FeatureBundle(
        metadata=ClipMetadata("fixture-music", 8.0, 22050),
        events=(EventTag("Music", 0.0, 8.0, 0.88),),
        notes=(
            NoteEvent(69, 0.0, 1.0, "piano", 96),
            NoteEvent(73, 1.0, 2.0, "piano", 96),
            NoteEvent(76, 2.0, 3.0, "piano", 96),
        ),
        chords=(
            ChordSegment("C:maj", 0.0, 4.0),
            ChordSegment("F:maj", 4.0, 8.0),
        ),
        music_tags=(MusicTag("piano", 0.9), MusicTag("classical", 0.7)),
        extractor_provenance=_prov("events", "notes", "chords", "music_tags"),
    )


def _mixed() -> FeatureBundle:
    return FeatureBundle(
        metadata=ClipMetadata("fixture-mixed", 10.0, 22050),
        events=(
            EventTag("Doorbell", 0.5, 1.2, 0.85),
            EventTag("Dog bark", 2.0, 2.8, 0.77),
            EventTag("Music", 4.0, 10.0, 0.81),
            EventTag("Speech", 1.3, 3.9, 0.9),
        ),
        transcript=(TranscriptSegment("Someone is at the door.", 1.4, 3.7, None),),
        emotion=EmotionLabel(0.5, 0.5, 0.5, "neutral"),
        notes=(NoteEvent(60, 4.2, 5.0, "unknown", 64),),
        chords=(ChordSegment("A:min", 4.0, 10.0),),
        music_tags=(MusicTag("ambient", 0.6),),
        extractor_provenance=_prov(
            "events", "transcript", "emotion", "notes", "chords", "music_tags"
        ),
    )


def _empty() -> FeatureBundle:
    return FeatureBundle(metadata=ClipMetadata("fixture-empty", 4.25, 0))


def _overflow() -> FeatureBundle:
    # 210 notes: ten past the 200-line cap, so the summary line renders.
    notes = tuple(
        NoteEvent(36 + (i * 5) % 72, i * 100 / 1000, (i * 100 + 90) / 1000, "piano", 80)
        for i in range(210)
    )
    return FeatureBundle(
        metadata=ClipMetadata("fixture-overflow", 25.0, 22050),
        events=(EventTag("Music", 0.0, 25.0, 0.9),),
        notes=notes,
        extractor_provenance=_prov("events", "notes"),
    )


def representative_bundles() -> dict[str, FeatureBundle]:
    return {
        "speech_only": _speech_only(),
        "music_only": _music_only(),
        "mixed": _mixed(),
        "empty": _empty(),
        "overflow": _overflow(),
    }


def representative_questions() -> dict[str, Question]:
    return {
        "speech_only": Question(
            "What does the second speaker say the kettle does every morning?",
            ("It whistles", "It leaks", "It clicks", "It hums"),
            "speech",
        ),
        "music_only": Question(
            "Which chord opens the clip?",
            ("C major", "F major", "A minor"),
            "music",
        ),
        "mixed": Question(
            "In which order do the sounds occur?",
            (
                "doorbell, dog bark, music",
                "music, doorbell, dog bark",
                "dog bark, music, doorbell",
            ),
            "mixed",
        ),
        "empty": Question(
            "Is any sound present in this clip?",
            ("yes", "no"),
            "sound",
        ),
        "overflow": Question(
            "How many distinct piano notes appear?",
            ("fewer than 50", "about 100", "more than 200"),
            "music",
        ),
    }


def representative_captions() -> dict[str, str]:
    return {
        "speech_only": (
            "Two speakers hold a short exchange: the first asks about the "
            "kettle near the start, and the second replies around three "
            "seconds in that it whistles every morning."
        ),
        "music_only": (
            "A solo piano plays three rising notes over a C major chord that "
            "moves to F major at the four second mark."
        ),
        "mixed": (
            "A doorbell rings first, someone speaks about the door, a dog "
            "barks at two seconds, and ambient music enters at four seconds "
            "and runs to the end."
        ),
        "empty": "The clip is silent with no detectable sound events.",
        "overflow": (
            "A dense stream of short piano notes runs steadily for the whole "
            "twenty five seconds."
        ),
    }


def golden_name(key: str, suffix: str) -> str:
    return f"{key}_{suffix}.txt"


def render_goldens() -> dict[str, str]:
    """All 20 golden prompt texts keyed by file name."""
    bundles = representative_bundles()
    questions = representative_questions()
    captions = representative_captions()
    out = {}
    for key in GOLDEN_KEYS:
        bundle, question = bundles[key], questions[key]
        out[golden_name(key, "flat")] = build_flat_prompt(bundle, question).text
        out[golden_name(key, "caption1")] = build_caption_prompt(bundle).text
        out[golden_name(key, "caption2")] = build_caption_reasoning_prompt(
            captions[key], question
        ).text
        out[golden_name(key, "agent")] = build_agent_selection_prompt(
            question, bundle
        ).text
    return out


def write_prompt_goldens(directory: str | Path) -> list[Path]:
    """Regenerate every golden file; returns the written paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in sorted(render_goldens().items()):
        path = directory / name
        path.write_text(text)
        paths.append(path)
    return paths
