"""Bundle construction, validation, and timeline rendering."""

from __future__ import annotations

import random

import pytest

from symaudio.errors import InvalidBundle
from symaudio.model import (
    CHORD_SYMBOLS,
    EVENT_END_TOLERANCE_S,
    LAYERS,
    PITCH_CLASSES,
    ChordSegment,
    ClipMetadata,
    EmotionLabel,
    EventTag,
    FeatureBundle,
    MusicTag,
    NoteEvent,
    Provenance,
    TranscriptSegment,
    feature_content,
    feature_span,
    keep_layers,
    midi_note_name,
    render_timeline,
    validate_bundle,
)
from symaudio.testing import random_bundle


def _meta(duration=10.0):
    return ClipMetadata("clip", duration, 16000)


def _prov(*layers):
    return {layer: Provenance(f"x-{layer}", "1") for layer in layers}


def test_layer_vocabulary():
    assert LAYERS == ("events", "transcript", "emotion", "notes", "chords", "music_tags")
    assert len(PITCH_CLASSES) == 12
    assert len(CHORD_SYMBOLS) == 25
    assert CHORD_SYMBOLS[-1] == "N"
    assert "C:maj" in CHORD_SYMBOLS and "A:min" in CHORD_SYMBOLS


def test_construction_sorts_every_list_layer():
    bundle = FeatureBundle(
        metadata=_meta(),
        events=(
            EventTag("late", 5.0, 6.0, 0.5),
            EventTag("early", 1.0, 2.0, 0.5),
        ),
        transcript=(
            TranscriptSegment("b", 3.0, 4.0),
            TranscriptSegment("a", 0.5, 1.0),
        ),
        notes=(
            NoteEvent(70, 2.0, 3.0),
            NoteEvent(60, 0.0, 1.0),
        ),
        chords=(
            ChordSegment("F:maj", 5.0, 10.0),
            ChordSegment("C:maj", 0.0, 5.0),
        ),
        music_tags=(
            MusicTag("zeta", 0.4),
            MusicTag("alpha", 0.9),
        ),
        extractor_provenance=_prov(*LAYERS),
    )
    assert [e.label for e in bundle.events] == ["early", "late"]
    assert [t.text for t in bundle.transcript] == ["a", "b"]
    assert [n.midi_pitch for n in bundle.notes] == [60, 70]
    assert [c.symbol for c in bundle.chords] == ["C:maj", "F:maj"]
    # Tags sort by confidence descending, then label.
    assert [m.label for m in bundle.music_tags] == ["alpha", "zeta"]


def test_equal_bundles_regardless_of_construction_order():
    events = (EventTag("a", 0.0, 1.0, 0.5), EventTag("b", 2.0, 3.0, 0.5))
    one = FeatureBundle(metadata=_meta(), events=events, extractor_provenance=_prov("events"))
    other = FeatureBundle(
        metadata=_meta(), events=events[::-1], extractor_provenance=_prov("events")
    )
    assert one == other


def test_layer_items_wraps_emotion():
    emo = EmotionLabel(0.5, 0.5, 0.5, "neutral")
    bundle = FeatureBundle(metadata=_meta(), emotion=emo, extractor_provenance=_prov("emotion"))
    assert bundle.layer_items("emotion") == (emo,)
    assert FeatureBundle(metadata=_meta()).layer_items("emotion") == ()
    assert bundle.layer_items("events") == ()


def test_nonempty_layers():
    bundle = FeatureBundle(
        metadata=_meta(),
        events=(EventTag("a", 0.0, 1.0, 0.5),),
        notes=(NoteEvent(60, 0.0, 1.0),),
        extractor_provenance=_prov("events", "notes"),
    )
    assert bundle.nonempty_layers() == {"events", "notes"}
    assert FeatureBundle(metadata=_meta()).nonempty_layers() == set()


def test_keep_layers_filters_and_drops_provenance():
    bundle = FeatureBundle(
        metadata=_meta(),
        events=(EventTag("a", 0.0, 1.0, 0.5),),
        transcript=(TranscriptSegment("hi", 0.0, 1.0),),
        emotion=EmotionLabel(0.5, 0.5, 0.5, "neutral"),
        notes=(NoteEvent(60, 0.0, 1.0),),
        extractor_provenance=_prov("events", "transcript", "emotion", "notes"),
    )
    kept = keep_layers(bundle, {"events", "notes"})
    assert kept.metadata == bundle.metadata
    assert kept.events == bundle.events
    assert kept.notes == bundle.notes
    assert kept.transcript == ()
    assert kept.emotion is None
    assert set(kept.extractor_provenance) == {"events", "notes"}


def test_keep_layers_idempotent():
    bundle = random_bundle(random.Random(7))
    once = keep_layers(bundle, {"events", "chords"})
    assert keep_layers(once, {"events", "chords"}) == once


def test_random_bundles_are_valid():
    rng = random.Random(1234)
    for _ in range(300):
        assert validate_bundle(random_bundle(rng)) == []


def test_validate_metadata_violations():
    report = validate_bundle(FeatureBundle(metadata=ClipMetadata("", -1.0, -8000)))
    codes = {v.code for v in report}
    assert codes == {
        "metadata.empty_clip_id",
        "metadata.negative_duration",
        "metadata.bad_sample_rate",
    }


def test_validate_event_violations():
    bundle = FeatureBundle(
        metadata=_meta(duration=5.0),
        events=(
            EventTag("neg", -0.5, 1.0, 0.5),
            EventTag("swap", 3.0, 2.0, 0.5),
            EventTag("long", 1.0, 5.2, 0.5),
            EventTag("conf", 1.0, 2.0, 1.5),
        ),
        extractor_provenance=_prov("events"),
    )
    codes = [v.code for v in validate_bundle(bundle)]
    assert "event.start_negative" in codes
    assert "event.start_after_end" in codes
    assert "event.end_past_duration" in codes
    assert "event.confidence_range" in codes


def test_event_end_tolerance_band():
    def one(end):
        return FeatureBundle(
            metadata=_meta(duration=5.0),
            events=(EventTag("a", 0.0, end, 0.5),),
            extractor_provenance=_prov("events"),
        )

    assert validate_bundle(one(5.0 + EVENT_END_TOLERANCE_S)) == []
    report = validate_bundle(one(5.0 + EVENT_END_TOLERANCE_S + 0.001))
    assert [v.code for v in report] == ["event.end_past_duration"]


def test_validate_transcript_violations():
    bundle = FeatureBundle(
        metadata=_meta(),
        transcript=(
            TranscriptSegment("", 0.0, 1.0),
            TranscriptSegment("ok", 3.0, 2.0),
        ),
        extractor_provenance=_prov("transcript"),
    )
    codes = {v.code for v in validate_bundle(bundle)}
    assert codes == {"transcript.empty_text", "transcript.start_after_end"}


def test_validate_emotion_violations():
    out_of_range = FeatureBundle(
        metadata=_meta(),
        emotion=EmotionLabel(1.2, 0.5, 0.5, "excited"),
        extractor_provenance=_prov("emotion"),
    )
    assert [v.code for v in validate_bundle(out_of_range)] == ["emotion.value_range"]

    mislabeled = FeatureBundle(
        metadata=_meta(),
        emotion=EmotionLabel(0.9, 0.9, 0.5, "sad"),
        extractor_provenance=_prov("emotion"),
    )
    assert [v.code for v in validate_bundle(mislabeled)] == ["emotion.label_mismatch"]


def test_validate_note_violations():
    bundle = FeatureBundle(
        metadata=_meta(),
        notes=(
            NoteEvent(150, 0.0, 1.0),
            NoteEvent(60, 2.0, 2.0),
            NoteEvent(60, 3.0, 4.0, velocity=200),
        ),
        extractor_provenance=_prov("notes"),
    )
    codes = {v.code for v in validate_bundle(bundle)}
    assert codes == {
        "note.pitch_range",
        "note.onset_not_before_offset",
        "note.velocity_range",
    }


def test_validate_chord_violations():
    bundle = FeatureBundle(
        metadata=_meta(),
        chords=(
            ChordSegment("H:maj", 0.0, 1.0),
            ChordSegment("C:maj", 0.5, 2.0),
            ChordSegment("C:maj", 2.0, 3.0),
            ChordSegment("D:min", 4.0, 4.0),
        ),
        extractor_provenance=_prov("chords"),
    )
    codes = [v.code for v in validate_bundle(bundle)]
    assert "chord.bad_symbol" in codes
    assert "chord.overlap" in codes
    assert "chord.adjacent_duplicate" in codes
    assert "chord.start_not_before_end" in codes


def test_validate_tag_and_provenance_violations():
    bundle = FeatureBundle(
        metadata=_meta(),
        music_tags=(MusicTag("rock", 1.5),),
    )
    codes = {v.code for v in validate_bundle(bundle)}
    assert codes == {"tag.confidence_range", "provenance.missing"}


def test_extra_provenance_on_empty_layer_is_allowed():
    bundle = FeatureBundle(metadata=_meta(), extractor_provenance=_prov("events"))
    assert validate_bundle(bundle) == []


def test_midi_note_name():
    assert midi_note_name(69) == "A4"
    assert midi_note_name(60) == "C4"
    assert midi_note_name(0) == "C-1"
    assert midi_note_name(127) == "G9"


def test_feature_span_per_layer():
    assert feature_span("events", EventTag("a", 1.0, 2.0, 0.5), 10.0) == (1.0, 2.0)
    assert feature_span("transcript", TranscriptSegment("t", 3.0, 4.0), 10.0) == (3.0, 4.0)
    assert feature_span("chords", ChordSegment("C:maj", 0.0, 5.0), 10.0) == (0.0, 5.0)
    assert feature_span("notes", NoteEvent(60, 2.5, 3.5), 10.0) == (2.5, 3.5)
    assert feature_span("emotion", EmotionLabel(0.5, 0.5, 0.5, "neutral"), 10.0) == (0.0, 10.0)
    assert feature_span("music_tags", MusicTag("rock", 0.9), 10.0) == (0.0, 10.0)


def test_feature_content_formats():
    assert (
        feature_content("events", EventTag("Dog bark", 0.0, 1.0, 0.774))
        == "Dog bark (confidence 0.77)"
    )
    assert (
        feature_content("transcript", TranscriptSegment("hi there", 0.0, 1.0, "spk0"))
        == 'spk0: "hi there"'
    )
    assert feature_content("transcript", TranscriptSegment("hi", 0.0, 1.0)) == '"hi"'
    assert (
        feature_content("emotion", EmotionLabel(0.8, 0.7, 0.5, "excited"))
        == "emotion excited (valence 0.80, arousal 0.70, dominance 0.50)"
    )
    assert (
        feature_content("notes", NoteEvent(69, 0.0, 1.0, "piano", 96))
        == "A4 (midi 69, velocity 96, piano)"
    )
    assert feature_content("chords", ChordSegment("F:min", 0.0, 1.0)) == "F:min"
    assert (
        feature_content("music_tags", MusicTag("ambient", 0.6))
        == "ambient (confidence 0.60)"
    )
    with pytest.raises(ValueError):
        feature_content("nope", None)


def test_feature_content_collapses_whitespace():
    assert (
        feature_content("transcript", TranscriptSegment("two\n lines  here", 0.0, 1.0))
        == '"two lines here"'
    )


def test_render_timeline_order_and_tiebreak():
    bundle = FeatureBundle(
        metadata=_meta(duration=10.0),
        events=(EventTag("Music", 4.0, 10.0, 0.8),),
        transcript=(TranscriptSegment("hello", 1.0, 2.0),),
        emotion=EmotionLabel(0.5, 0.5, 0.5, "neutral"),
        notes=(NoteEvent(60, 4.0, 5.0),),
        extractor_provenance=_prov("events", "transcript", "emotion", "notes"),
    )
    timeline = render_timeline(bundle)
    starts = [entry[0] for entry in timeline]
    assert starts == sorted(starts)
    # Emotion spans the whole clip so it leads at t=0.
    assert timeline[0][1] == "emotion"
    # Events precede notes at the shared t=4.0 (layer order breaks the tie).
    shared = [entry[1] for entry in timeline if entry[0] == 4.0]
    assert shared == ["events", "notes"]


def test_render_timeline_rejects_invalid_bundle():
    bad = FeatureBundle(
        metadata=_meta(),
        notes=(NoteEvent(60, 2.0, 1.0),),
        extractor_provenance=_prov("notes"),
    )
    with pytest.raises(InvalidBundle) as err:
        render_timeline(bad)
    assert any(v.code == "note.onset_not_before_offset" for v in err.value.report)
