"""Canonical symbolic feature types, bundle validation, and timeline rendering.

All types are immutable after construction; list-valued fields are stored as
tuples and sorted into canonical order, so semantically equal bundles compare
equal regardless of construction order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from symaudio.emotion import discretize_emotion

# Feature layers in prompt/timeline order.
LAYERS = ("events", "transcript", "emotion", "notes", "chords", "music_tags")

PITCH_CLASSES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")

# 24 major/minor triads plus "N" (no chord).
CHORD_SYMBOLS = tuple(
    f"{pc}:{quality}" for pc in PITCH_CLASSES for quality in ("maj", "min")
) + ("N",)

# Events may overshoot the clip end by this much before being flagged.
EVENT_END_TOLERANCE_S = 0.05


@dataclass(frozen=True)
class ClipMetadata:
    clip_id: str
    duration_s: float
    sample_rate_hz: int = 0  # 0 = unknown (precomputed features only)
    source_path: str | None = None


@dataclass(frozen=True)
class EventTag:
    label: str
    start_s: float
    end_s: float
    confidence: float


@dataclass(frozen=True)
class TranscriptSegment:
    text: str
    start_s: float
    end_s: float
    speaker: str | None = None


@dataclass(frozen=True)
class EmotionLabel:
    valence: float
    arousal: float
    dominance: float
    label: str


@dataclass(frozen=True)
class NoteEvent:
    midi_pitch: int
    onset_s: float
    offset_s: float
    instrument: str = "unknown"
    velocity: int = 64  # MIDI midpoint when the extractor reports none


@dataclass(frozen=True)
class ChordSegment:
    symbol: str
    start_s: float
    end_s: float


@dataclass(frozen=True)
class MusicTag:
    label: str
    confidence: float


@dataclass(frozen=True)
class Provenance:
    """Which extractor produced a layer; error is set when it failed."""

    name: str
    version: str
    error: str | None = None


def _sorted_events(items):
    return tuple(sorted(items, key=lambda e: (e.start_s, e.end_s, e.label, e.confidence)))


def _sorted_transcript(items):
    return tuple(sorted(items, key=lambda t: (t.start_s, t.end_s, t.text, t.speaker or "")))


def _sorted_notes(items):
    return tuple(
        sorted(items, key=lambda n: (n.onset_s, n.offset_s, n.midi_pitch, n.instrument, n.velocity))
    )


def _sorted_chords(items):
    return tuple(sorted(items, key=lambda c: (c.start_s, c.end_s, c.symbol)))


def _sorted_music_tags(items):
    return tuple(sorted(items, key=lambda m: (-m.confidence, m.label)))


@dataclass(frozen=True)
class FeatureBundle:
    metadata: ClipMetadata
    events: tuple[EventTag, ...] = ()
    transcript: tuple[TranscriptSegment, ...] = ()
    emotion: EmotionLabel | None = None
    notes: tuple[NoteEvent, ...] = ()
    chords: tuple[ChordSegment, ...] = ()
    music_tags: tuple[MusicTag, ...] = ()
    extractor_provenance: dict[str, Provenance] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "events", _sorted_events(self.events))
        object.__setattr__(self, "transcript", _sorted_transcript(self.transcript))
        object.__setattr__(self, "notes", _sorted_notes(self.notes))
        object.__setattr__(self, "chords", _sorted_chords(self.chords))
        object.__setattr__(self, "music_tags", _sorted_music_tags(self.music_tags))
        object.__setattr__(self, "extractor_provenance", dict(self.extractor_provenance))

    def layer_items(self, layer: str) -> tuple:
        """Features of one layer as a tuple (emotion wrapped in a 1-tuple)."""
        if layer == "emotion":
            return (self.emotion,) if self.emotion is not None else ()
        return getattr(self, layer)

    def nonempty_layers(self) -> set[str]:
        return {layer for layer in LAYERS if self.layer_items(layer)}


def keep_layers(bundle: FeatureBundle, layers: set[str]) -> FeatureBundle:
    """Copy of *bundle* with only the named layers kept.

    Metadata is always kept. Provenance entries for layers that become empty
    are dropped so filtered bundles serialize canonically.
    """
    kept = {
        "events": bundle.events if "events" in layers else (),
        "transcript": bundle.transcript if "transcript" in layers else (),
        "emotion": bundle.emotion if "emotion" in layers else None,
        "notes": bundle.notes if "notes" in layers else (),
        "chords": bundle.chords if "chords" in layers else (),
        "music_tags": bundle.music_tags if "music_tags" in layers else (),
    }
    provenance = {
        layer: prov
        for layer, prov in bundle.extractor_provenance.items()
        if layer in layers
    }
    return replace(bundle, extractor_provenance=provenance, **kept)


@dataclass(frozen=True)
class Violation:
    code: str
    layer: str
    index: int | None
    message: str


ValidationReport = list  # list[Violation]; empty report = valid bundle


def _check_sorted(items, key, layer, violations):
    keys = [key(item) for item in items]
    for i in range(1, len(keys)):
        if keys[i] < keys[i - 1]:
            violations.append(
                Violation(f"{layer}.unsorted", layer, i, "list not sorted by start time")
            )
            return


def validate_bundle(bundle: FeatureBundle) -> ValidationReport:
    """Collect every invariant violation in *bundle*.

    Violations are data, not errors: the bundle is never mutated and an empty
    report means the bundle is valid.
    """
    v: list[Violation] = []
    meta = bundle.metadata

    if not meta.clip_id:
        v.append(Violation("metadata.empty_clip_id", "metadata", None, "clip_id must be nonempty"))
    if meta.duration_s < 0:
        v.append(Violation("metadata.negative_duration", "metadata", None,
                           f"duration_s must be >= 0, got {meta.duration_s}"))
    if meta.sample_rate_hz < 0 or int(meta.sample_rate_hz) != meta.sample_rate_hz:
        v.append(Violation("metadata.bad_sample_rate", "metadata", None,
                           f"sample_rate_hz must be a nonnegative integer, got {meta.sample_rate_hz}"))

    max_end = meta.duration_s + EVENT_END_TOLERANCE_S
    for i, e in enumerate(bundle.events):
        if e.start_s < 0:
            v.append(Violation("event.start_negative", "events", i,
                               f"start_s {e.start_s} < 0"))
        if e.start_s > e.end_s:
            v.append(Violation("event.start_after_end", "events", i,
                               f"start_s {e.start_s} > end_s {e.end_s}"))
        if e.end_s > max_end:
            v.append(Violation("event.end_past_duration", "events", i,
                               f"end_s {e.end_s} > duration {meta.duration_s} (+{EVENT_END_TOLERANCE_S} tolerance)"))
        if not 0.0 <= e.confidence <= 1.0:
            v.append(Violation("event.confidence_range", "events", i,
                               f"confidence {e.confidence} outside [0, 1]"))

    for i, t in enumerate(bundle.transcript):
        if t.start_s > t.end_s:
            v.append(Violation("transcript.start_after_end", "transcript", i,
                               f"start_s {t.start_s} > end_s {t.end_s}"))
        if not t.text:
            v.append(Violation("transcript.empty_text", "transcript", i, "text must be nonempty"))

    emo = bundle.emotion
    if emo is not None:
        in_range = all(0.0 <= x <= 1.0 for x in (emo.valence, emo.arousal, emo.dominance))
        if not in_range:
            v.append(Violation("emotion.value_range", "emotion", 0,
                               "valence/arousal/dominance must be in [0, 1]"))
        elif emo.label != discretize_emotion(emo.valence, emo.arousal, emo.dominance):
            v.append(Violation("emotion.label_mismatch", "emotion", 0,
                               f"label {emo.label!r} does not match discretized VAD"))

    for i, n in enumerate(bundle.notes):
        if not 0 <= n.midi_pitch <= 127:
            v.append(Violation("note.pitch_range", "notes", i,
                               f"midi_pitch {n.midi_pitch} outside 0..127"))
        if not 0 <= n.velocity <= 127:
            v.append(Violation("note.velocity_range", "notes", i,
                               f"velocity {n.velocity} outside 0..127"))
        if not n.onset_s < n.offset_s:
            v.append(Violation("note.onset_not_before_offset", "notes", i,
                               f"onset_s {n.onset_s} must be < offset_s {n.offset_s}"))

    for i, c in enumerate(bundle.chords):
        if c.symbol not in CHORD_SYMBOLS:
            v.append(Violation("chord.bad_symbol", "chords", i, f"unknown symbol {c.symbol!r}"))
        if not c.start_s < c.end_s:
            v.append(Violation("chord.start_not_before_end", "chords", i,
                               f"start_s {c.start_s} must be < end_s {c.end_s}"))
        if i > 0:
            prev = bundle.chords[i - 1]
            if c.start_s < prev.end_s:
                v.append(Violation("chord.overlap", "chords", i,
                                   f"segment starts at {c.start_s} before previous ends at {prev.end_s}"))
            if c.symbol == prev.symbol:
                v.append(Violation("chord.adjacent_duplicate", "chords", i,
                                   f"adjacent segments share symbol {c.symbol!r}"))

    for i, m in enumerate(bundle.music_tags):
        if not 0.0 <= m.confidence <= 1.0:
            v.append(Violation("tag.confidence_range", "music_tags", i,
                               f"confidence {m.confidence} outside [0, 1]"))

    _check_sorted(bundle.events, lambda e: e.start_s, "events", v)
    _check_sorted(bundle.transcript, lambda t: t.start_s, "transcript", v)
    _check_sorted(bundle.notes, lambda n: n.onset_s, "notes", v)
    _check_sorted(bundle.chords, lambda c: c.start_s, "chords", v)

    for layer in LAYERS:
        if bundle.layer_items(layer) and layer not in bundle.extractor_provenance:
            v.append(Violation("provenance.missing", layer, None,
                               f"nonempty layer {layer!r} has no provenance entry"))

    return v


def _single_line(text: str) -> str:
    return " ".join(text.split())


def midi_note_name(pitch: int) -> str:
    """MIDI pitch number to scientific pitch name (69 -> A4)."""
    return f"{PITCH_CLASSES[pitch % 12]}{pitch // 12 - 1}"


def feature_span(layer: str, feature, duration_s: float) -> tuple[float, float]:
    """(start, end) of one feature; whole-clip layers span [0, duration]."""
    if layer == "events" or layer == "transcript" or layer == "chords":
        return (feature.start_s, feature.end_s)
    if layer == "notes":
        return (feature.onset_s, feature.offset_s)
    return (0.0, duration_s)  # emotion and music_tags have no timestamps


def feature_content(layer: str, feature) -> str:
    """Single-line text rendering of one feature, shared by timeline and prompts."""
    if layer == "events":
        return f"{_single_line(feature.label)} (confidence {feature.confidence:.2f})"
    if layer == "transcript":
        text = _single_line(feature.text)
        if feature.speaker:
            return f'{_single_line(feature.speaker)}: "{text}"'
        return f'"{text}"'
    if layer == "emotion":
        return (
            f"emotion {feature.label} (valence {feature.valence:.2f}, "
            f"arousal {feature.arousal:.2f}, dominance {feature.dominance:.2f})"
        )
    if layer == "notes":
        return (
            f"{midi_note_name(feature.midi_pitch)} (midi {feature.midi_pitch}, "
            f"velocity {feature.velocity}, {_single_line(feature.instrument)})"
        )
    if layer == "chords":
        return feature.symbol
    if layer == "music_tags":
        return f"{_single_line(feature.label)} (confidence {feature.confidence:.2f})"
    raise ValueError(f"unknown layer {layer!r}")


def render_timeline(bundle: FeatureBundle) -> list[tuple[float, str, str]]:
    """Merge all layers into one (start_s, layer, content) timeline.

    Sorted by start time; ties broken by layer order then content text.

    Raises:
        InvalidBundle: if the bundle fails validation.
    """
    from symaudio.errors import InvalidBundle

    report = validate_bundle(bundle)
    if report:
        raise InvalidBundle(report)
    duration = bundle.metadata.duration_s
    entries = []
    for layer_idx, layer in enumerate(LAYERS):
        for feature in bundle.layer_items(layer):
            start, _ = feature_span(layer, feature, duration)
            entries.append((start, layer_idx, feature_content(layer, feature)))
    entries.sort()
    return [(start, LAYERS[layer_idx], content) for start, layer_idx, content in entries]
