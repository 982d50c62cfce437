"""Prompt composition: templates, validation, goldens, and the inverse parser."""

from __future__ import annotations

from pathlib import Path

import pytest

from symaudio.goldens import (
    GOLDEN_KEYS,
    STYLE_SUFFIXES,
    golden_name,
    render_goldens,
    representative_bundles,
    representative_questions,
)
from symaudio.errors import EmptyCaption, EmptyQuestion, InvalidBundle
from symaudio.model import (
    LAYERS,
    ClipMetadata,
    EventTag,
    FeatureBundle,
    NoteEvent,
    Provenance,
    feature_content,
    feature_span,
)
from symaudio.prompts import (
    ANSWER_INSTRUCTION,
    CAPTION_INSTRUCTION,
    MAX_LINES_PER_LAYER,
    PromptStyle,
    Question,
    SELECTION_INSTRUCTION,
    build_agent_selection_prompt,
    build_caption_prompt,
    build_caption_reasoning_prompt,
    build_flat_prompt,
    option_letter,
    parse_prompt_features,
    validate_question,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "prompts"


def _bundle(**layers) -> FeatureBundle:
    prov = {name: Provenance(f"test-{name}", "1") for name in layers}
    return FeatureBundle(
        metadata=ClipMetadata("clip", 10.0, 16000),
        extractor_provenance=prov,
        **layers,
    )


QUESTION = Question(
    text="What sound occurs first?",
    options=("Doorbell", "Dog barking"),
    category="sound",
)


def test_golden_files_byte_match():
    rendered = render_goldens()
    assert len(rendered) == len(GOLDEN_KEYS) * len(STYLE_SUFFIXES) == 20
    for key in GOLDEN_KEYS:
        for suffix in STYLE_SUFFIXES:
            name = golden_name(key, suffix)
            on_disk = (FIXTURES / name).read_text(encoding="utf-8")
            assert rendered[name] == on_disk, name


def test_flat_prompt_structure():
    bundle = _bundle(
        events=[EventTag("Doorbell", 0.5, 1.2, 0.85)],
        notes=[NoteEvent(69, 2.0, 3.0)],
    )
    prompt = build_flat_prompt(bundle, QUESTION)
    assert prompt.style is PromptStyle.FLAT
    assert prompt.text.startswith("METADATA\nduration: 10.000 s\n\n")
    assert "SOUND EVENTS\n[0.500–1.200] Doorbell (confidence 0.85)" in prompt.text
    assert "NOTES\n[2.000–3.000] A4 (midi 69, velocity 64, unknown)" in prompt.text
    assert "QUESTION\nWhat sound occurs first?\n(A) Doorbell\n(B) Dog barking" in prompt.text
    assert prompt.text.endswith(ANSWER_INSTRUCTION + "\n")
    assert prompt.included_layers == frozenset({"events", "notes"})
    assert prompt.feature_manifest == (("events", 1), ("notes", 1))


def test_empty_layers_render_no_sections():
    prompt = build_flat_prompt(_bundle(), QUESTION)
    for title in ("SOUND EVENTS", "TRANSCRIPT", "EMOTION", "NOTES", "CHORDS", "MUSIC TAGS"):
        assert title not in prompt.text
    assert prompt.included_layers == frozenset()
    assert prompt.feature_manifest == ()


def test_rendering_is_deterministic():
    bundle = _bundle(events=[EventTag("Beep", 1.0, 2.0, 0.5)])
    texts = {build_flat_prompt(bundle, QUESTION).text for _ in range(5)}
    assert len(texts) == 1


def test_overflow_line_and_cap():
    notes = [NoteEvent(60, i * 0.01, i * 0.01 + 0.005) for i in range(MAX_LINES_PER_LAYER + 10)]
    prompt = build_flat_prompt(_bundle(notes=notes), QUESTION)
    note_lines = [
        line for line in prompt.text.splitlines() if line.startswith("[") and "midi" in line
    ]
    assert len(note_lines) == MAX_LINES_PER_LAYER
    assert "… and 10 more" in prompt.text


def test_caption_stage1_prompt():
    bundle = _bundle(events=[EventTag("Rain", 0.0, 10.0, 0.9)])
    prompt = build_caption_prompt(bundle)
    assert prompt.style is PromptStyle.CAPTION_STAGE1
    assert prompt.text.endswith(CAPTION_INSTRUCTION + "\n")
    assert "QUESTION" not in prompt.text
    assert "[0.000–10.000] Rain (confidence 0.90)" in prompt.text


def test_caption_stage2_prompt():
    prompt = build_caption_reasoning_prompt("  Rain falls steadily.  ", QUESTION)
    assert prompt.style is PromptStyle.CAPTION_STAGE2
    assert prompt.text.startswith("CAPTION\nRain falls steadily.\n\nQUESTION\n")
    assert prompt.text.endswith(ANSWER_INSTRUCTION + "\n")
    assert prompt.included_layers == frozenset()
    with pytest.raises(EmptyCaption):
        build_caption_reasoning_prompt("   \n  ", QUESTION)


def test_agent_selection_prompt_lists_all_layers():
    bundle = _bundle(events=[EventTag("Beep", 1.0, 2.0, 0.5)])
    prompt = build_agent_selection_prompt(QUESTION, bundle)
    assert prompt.style is PromptStyle.AGENT_SELECTION
    assert "AVAILABLE FEATURE LAYERS (name: feature count)" in prompt.text
    assert "events: 1" in prompt.text
    for layer in ("transcript", "emotion", "notes", "chords", "music_tags"):
        assert f"{layer}: 0" in prompt.text
    assert "Beep" not in prompt.text  # counts only, never content
    assert prompt.text.endswith(SELECTION_INSTRUCTION + "\n")
    assert prompt.included_layers == frozenset(LAYERS)
    assert dict(prompt.feature_manifest) == {
        "events": 1, "transcript": 0, "emotion": 0, "notes": 0, "chords": 0, "music_tags": 0,
    }


def test_question_validation():
    validate_question(QUESTION)
    with pytest.raises(EmptyQuestion):
        validate_question(Question("  ", ("a", "b")))
    with pytest.raises(EmptyQuestion):
        validate_question(Question("q", ("only",)))
    with pytest.raises(EmptyQuestion):
        validate_question(Question("q", tuple(f"opt{i}" for i in range(11))))
    with pytest.raises(EmptyQuestion):
        validate_question(Question("q", ("same", "same")))
    with pytest.raises(EmptyQuestion):
        validate_question(Question("q", ("a", "   ")))
    with pytest.raises(EmptyQuestion):
        validate_question(Question("q", ("a", "two\nlines")))
    with pytest.raises(EmptyQuestion):
        validate_question(Question("q", ("a", "b"), category="noise"))


def test_ten_options_render_a_through_j():
    question = Question("q?", tuple(f"opt{i}" for i in range(10)))
    prompt = build_flat_prompt(_bundle(), question)
    assert "(A) opt0" in prompt.text
    assert "(J) opt9" in prompt.text
    assert option_letter(9) == "J"


def test_invalid_bundle_rejected():
    bad = _bundle(events=[EventTag("Beep", 3.0, 1.0, 0.5)])
    with pytest.raises(InvalidBundle):
        build_flat_prompt(bad, QUESTION)


def test_parse_prompt_features_inverts_rendering():
    for key, bundle in representative_bundles().items():
        question = representative_questions()[key]
        prompt = build_flat_prompt(bundle, question)
        parsed = parse_prompt_features(prompt.text)
        duration = bundle.metadata.duration_s
        expected = []
        for layer in LAYERS:
            for item in bundle.layer_items(layer)[:MAX_LINES_PER_LAYER]:
                start, end = feature_span(layer, item, duration)
                expected.append((layer, feature_content(layer, item)))
        assert [(layer, content) for layer, content, in
                ((p[0], p[3]) for p in parsed)] == expected
        for layer, start, end, _ in parsed:
            assert start <= end


def test_parse_prompt_features_skips_overflow_and_foreign_lines():
    notes = [NoteEvent(60, i * 0.01, i * 0.01 + 0.005) for i in range(MAX_LINES_PER_LAYER + 3)]
    prompt = build_flat_prompt(_bundle(notes=notes), QUESTION)
    parsed = parse_prompt_features(prompt.text)
    assert len(parsed) == MAX_LINES_PER_LAYER
    assert all(layer == "notes" for layer, *_ in parsed)
