"""Bit-exact canonical JSON for feature bundles (schema_version 1).

This format is the wire contract shared by the precomputed-ingestion path and
the sidecar protocol. Canonical rules: object keys sorted, every real-valued
field rendered as a decimal string with exactly three fractional digits
(round-half-up), lists in time order. Identical bundles serialize to identical
bytes, and serialization round-trips losslessly for bundles whose reals are
already at millisecond precision.
"""

from __future__ import annotations

import json
from decimal import ROUND_HALF_UP, Decimal

from symaudio.errors import InvalidBundle, ParseError, SchemaVersionMismatch
from symaudio.model import (
    ChordSegment,
    ClipMetadata,
    EmotionLabel,
    EventTag,
    FeatureBundle,
    MusicTag,
    NoteEvent,
    Provenance,
    TranscriptSegment,
    validate_bundle,
)

SCHEMA_VERSION = 1

_MS = Decimal("0.001")


def format_seconds(value: float) -> str:
    """Render a real value with exactly 3 fractional digits, round-half-up."""
    return str(Decimal(repr(float(value))).quantize(_MS, rounding=ROUND_HALF_UP))


def _num(value) -> float:
    # Canonical files carry decimal strings; plain JSON numbers are accepted too.
    if isinstance(value, str):
        return float(value)
    if isinstance(value, (int, float)):
        return float(value)
    raise ParseError(f"expected number or decimal string, got {value!r}")


def bundle_to_payload(bundle: FeatureBundle) -> dict:
    meta = bundle.metadata
    emo = bundle.emotion
    return {
        "schema_version": SCHEMA_VERSION,
        "metadata": {
            "clip_id": meta.clip_id,
            "duration_s": format_seconds(meta.duration_s),
            "sample_rate_hz": int(meta.sample_rate_hz),
            "source_path": meta.source_path,
        },
        "events": [
            {
                "label": e.label,
                "start_s": format_seconds(e.start_s),
                "end_s": format_seconds(e.end_s),
                "confidence": format_seconds(e.confidence),
            }
            for e in bundle.events
        ],
        "transcript": [
            {
                "text": t.text,
                "start_s": format_seconds(t.start_s),
                "end_s": format_seconds(t.end_s),
                "speaker": t.speaker,
            }
            for t in bundle.transcript
        ],
        "emotion": None
        if emo is None
        else {
            "valence": format_seconds(emo.valence),
            "arousal": format_seconds(emo.arousal),
            "dominance": format_seconds(emo.dominance),
            "label": emo.label,
        },
        "notes": [
            {
                "midi_pitch": int(n.midi_pitch),
                "onset_s": format_seconds(n.onset_s),
                "offset_s": format_seconds(n.offset_s),
                "instrument": n.instrument,
                "velocity": int(n.velocity),
            }
            for n in bundle.notes
        ],
        "chords": [
            {
                "symbol": c.symbol,
                "start_s": format_seconds(c.start_s),
                "end_s": format_seconds(c.end_s),
            }
            for c in bundle.chords
        ],
        "music_tags": [
            {"label": m.label, "confidence": format_seconds(m.confidence)}
            for m in bundle.music_tags
        ],
        "extractor_provenance": {
            layer: {"name": p.name, "version": p.version, "error": p.error}
            for layer, p in bundle.extractor_provenance.items()
        },
    }


def serialize_bundle(bundle: FeatureBundle) -> str:
    """Canonical JSON text for a valid bundle.

    Raises:
        InvalidBundle: if validation reports any violation.
    """
    report = validate_bundle(bundle)
    if report:
        raise InvalidBundle(report)
    return json.dumps(bundle_to_payload(bundle), sort_keys=True, separators=(",", ":"))


def payload_to_bundle(payload: dict) -> FeatureBundle:
    try:
        version = payload["schema_version"]
        if version != SCHEMA_VERSION:
            raise SchemaVersionMismatch(
                f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION}"
            )
        meta = payload["metadata"]
        metadata = ClipMetadata(
            clip_id=meta["clip_id"],
            duration_s=_num(meta["duration_s"]),
            sample_rate_hz=int(meta["sample_rate_hz"]),
            source_path=meta.get("source_path"),
        )
        events = tuple(
            EventTag(
                label=e["label"],
                start_s=_num(e["start_s"]),
                end_s=_num(e["end_s"]),
                confidence=_num(e["confidence"]),
            )
            for e in payload.get("events", [])
        )
        transcript = tuple(
            TranscriptSegment(
                text=t["text"],
                start_s=_num(t["start_s"]),
                end_s=_num(t["end_s"]),
                speaker=t.get("speaker"),
            )
            for t in payload.get("transcript", [])
        )
        emo = payload.get("emotion")
        emotion = (
            None
            if emo is None
            else EmotionLabel(
                valence=_num(emo["valence"]),
                arousal=_num(emo["arousal"]),
                dominance=_num(emo["dominance"]),
                label=emo["label"],
            )
        )
        notes = tuple(
            NoteEvent(
                midi_pitch=int(n["midi_pitch"]),
                onset_s=_num(n["onset_s"]),
                offset_s=_num(n["offset_s"]),
                instrument=n.get("instrument", "unknown"),
                velocity=int(n.get("velocity", 64)),
            )
            for n in payload.get("notes", [])
        )
        chords = tuple(
            ChordSegment(
                symbol=c["symbol"], start_s=_num(c["start_s"]), end_s=_num(c["end_s"])
            )
            for c in payload.get("chords", [])
        )
        music_tags = tuple(
            MusicTag(label=m["label"], confidence=_num(m["confidence"]))
            for m in payload.get("music_tags", [])
        )
        provenance = {
            layer: Provenance(name=p["name"], version=p["version"], error=p.get("error"))
            for layer, p in payload.get("extractor_provenance", {}).items()
        }
    except SchemaVersionMismatch:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed feature payload: {exc}") from exc
    return FeatureBundle(
        metadata=metadata,
        events=events,
        transcript=transcript,
        emotion=emotion,
        notes=notes,
        chords=chords,
        music_tags=music_tags,
        extractor_provenance=provenance,
    )


def deserialize_bundle(text: str) -> FeatureBundle:
    """Parse canonical feature JSON back into a validated bundle.

    Raises:
        ParseError: malformed JSON or missing fields.
        SchemaVersionMismatch: unknown schema_version.
        InvalidBundle: parsed bundle violates invariants.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError("feature JSON must be a single object")
    bundle = payload_to_bundle(payload)
    report = validate_bundle(bundle)
    if report:
        raise InvalidBundle(report)
    return bundle
