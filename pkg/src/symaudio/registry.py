"""Extractor registry, disk cache, precomputed ingestion, and routing.

A registry maps feature layers to extractors of three kinds: native signal
processing (events, notes, chords), sidecar subprocesses speaking the
canonical JSON protocol, and precomputed feature files. Extraction merges the
per-layer outputs into one validated bundle; a failing extractor degrades to
an empty layer whose provenance records the error instead of aborting the
clip.
"""

from __future__ import annotations

import hashlib
import json
import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

from symaudio.dsp import (
    PcmClip,
    compute_chroma,
    detect_activity,
    estimate_chords,
    read_wav,
    track_notes,
    write_wav,
)
from symaudio.errors import AllExtractorsFailed, ParseError
from symaudio.model import (
    LAYERS,
    ChordSegment,
    ClipMetadata,
    FeatureBundle,
    Provenance,
    keep_layers,
)
from symaudio.serialize import deserialize_bundle, serialize_bundle

KINDS = ("native", "sidecar", "precomputed")

# Layers with a built-in extractor; the rest arrive via sidecars or files.
NATIVE_LAYERS = ("events", "notes", "chords")

SIDECAR_TIMEOUT_S = 300.0


@dataclass(frozen=True)
class ExtractorDescriptor:
    """One registered extractor.

    invocation is kind-specific: empty for native, a command prefix for
    sidecar (the WAV path is appended), and a file path possibly containing
    a {clip_id} placeholder for precomputed. version participates in the
    cache fingerprint so upgrading an extractor invalidates cached features.
    """

    name: str
    layer: str
    kind: str
    invocation: str = ""
    version: str = "1"


class Registry:
    """Immutable set of extractor descriptors, at most one per layer."""

    def __init__(self, descriptors: list[ExtractorDescriptor] | tuple[ExtractorDescriptor, ...]):
        descriptors = tuple(descriptors)
        names = set()
        layers = set()
        for desc in descriptors:
            if desc.layer not in LAYERS:
                raise ValueError(f"unknown layer {desc.layer!r}")
            if desc.kind not in KINDS:
                raise ValueError(f"unknown extractor kind {desc.kind!r}")
            if desc.kind == "native" and desc.layer not in NATIVE_LAYERS:
                raise ValueError(f"no native extractor for layer {desc.layer!r}")
            if desc.kind == "sidecar" and not desc.invocation:
                raise ValueError(f"sidecar {desc.name!r} needs an invocation")
            if desc.kind == "precomputed" and not desc.invocation:
                raise ValueError(f"precomputed {desc.name!r} needs a file path")
            if desc.name in names:
                raise ValueError(f"duplicate extractor name {desc.name!r}")
            if desc.layer in layers:
                raise ValueError(f"two extractors registered for layer {desc.layer!r}")
            names.add(desc.name)
            layers.add(desc.layer)
        self._descriptors = descriptors

    @property
    def descriptors(self) -> tuple[ExtractorDescriptor, ...]:
        return self._descriptors

    def fingerprint(self) -> str:
        """Stable digest of every descriptor; part of the cache key."""
        blob = json.dumps(
            sorted(
                (d.name, d.layer, d.kind, d.invocation, d.version)
                for d in self._descriptors
            ),
            separators=(",", ":"),
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def native_registry() -> Registry:
    """The default all-signal-processing registry."""
    return Registry(
        [
            ExtractorDescriptor("native-events", "events", "native"),
            ExtractorDescriptor("native-notes", "notes", "native"),
            ExtractorDescriptor("native-chords", "chords", "native"),
        ]
    )


def _native_extract(layer: str, clip: PcmClip):
    if layer == "events":
        return tuple(detect_activity(clip))
    if layer == "notes":
        return tuple(track_notes(clip))
    if layer == "chords":
        segments = estimate_chords(compute_chroma(clip))
        # Chroma frames tile past the final samples; pin the last boundary to
        # the true clip end so segments tile [0, duration].
        if segments and segments[-1].end_s > clip.duration_s:
            last = segments[-1]
            segments[-1] = ChordSegment(last.symbol, last.start_s, clip.duration_s)
        return tuple(segments)
    raise ValueError(f"no native extractor for layer {layer!r}")


def _layer_value(layer: str, items):
    if layer == "emotion":
        return items[0] if items else None
    return tuple(items)


def _run_sidecar(desc: ExtractorDescriptor, wav_path: str):
    argv = shlex.split(desc.invocation) + [wav_path]
    proc = subprocess.run(
        argv, capture_output=True, text=True, timeout=SIDECAR_TIMEOUT_S
    )
    if proc.returncode != 0:
        detail = proc.stderr.strip() or f"exit code {proc.returncode}"
        raise RuntimeError(f"sidecar failed: {detail}")
    bundle = deserialize_bundle(proc.stdout)
    return bundle.layer_items(desc.layer)


def _read_precomputed(desc: ExtractorDescriptor, clip_id: str):
    path = Path(desc.invocation.format(clip_id=clip_id))
    bundle = ingest_precomputed(path)
    return bundle.layer_items(desc.layer)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(f"{path.name}.tmp{os.getpid()}")
    tmp.write_text(text)
    os.replace(tmp, path)


def extract_all(
    clip_ref: str | Path | PcmClip,
    registry: Registry,
    cache_dir: str | Path | None = None,
    clip_id: str | None = None,
) -> FeatureBundle:
    """Run every registered extractor and merge the outputs into one bundle.

    With a cache directory, a second call for the same clip and registry
    returns the cached bundle without rerunning any extractor; the cache is
    invalidated when the registry fingerprint changes.

    Raises:
        ClipUnreadable: the referenced audio cannot be read.
        AllExtractorsFailed: every registered extractor raised.
        InvalidBundle: merged output violates bundle invariants.
    """
    if not registry.descriptors:
        raise ValueError("registry has no extractors")

    wav_path: Path | None = None
    if isinstance(clip_ref, PcmClip):
        clip = clip_ref
        clip_id = clip_id or "clip"
        source = None
    else:
        wav_path = Path(clip_ref)
        clip_id = clip_id or wav_path.stem
        source = str(wav_path)
        clip = read_wav(wav_path)

    cache = Path(cache_dir) if cache_dir is not None else None
    if cache is not None:
        cached = _cache_load(cache, clip_id, registry.fingerprint())
        if cached is not None:
            return cached

    needs_wav_file = any(d.kind == "sidecar" for d in registry.descriptors)
    temp_wav: str | None = None
    if needs_wav_file and wav_path is None:
        fd, temp_wav = tempfile.mkstemp(suffix=".wav")
        os.close(fd)
        write_wav(temp_wav, clip)

    try:
        sidecar_input = str(wav_path) if wav_path is not None else temp_wav
        layers: dict[str, object] = {}
        provenance: dict[str, Provenance] = {}
        failures = 0
        for desc in registry.descriptors:
            try:
                if desc.kind == "native":
                    items = _native_extract(desc.layer, clip)
                elif desc.kind == "sidecar":
                    items = _run_sidecar(desc, sidecar_input)
                else:
                    items = _read_precomputed(desc, clip_id)
                layers[desc.layer] = _layer_value(desc.layer, items)
                provenance[desc.layer] = Provenance(desc.name, desc.version)
            except Exception as exc:
                failures += 1
                layers[desc.layer] = _layer_value(desc.layer, ())
                provenance[desc.layer] = Provenance(
                    desc.name, desc.version, error=str(exc) or type(exc).__name__
                )
        if failures == len(registry.descriptors):
            raise AllExtractorsFailed(
                f"all {failures} extractors failed for clip {clip_id!r}"
            )
    finally:
        if temp_wav is not None:
            os.unlink(temp_wav)

    metadata = ClipMetadata(
        clip_id=clip_id,
        duration_s=clip.duration_s,
        sample_rate_hz=clip.sample_rate_hz,
        source_path=source,
    )
    bundle = FeatureBundle(metadata=metadata, extractor_provenance=provenance, **layers)
    # Round through the canonical form so cache hits and misses return the
    # same millisecond-quantized values. serialize_bundle also validates.
    text = serialize_bundle(bundle)
    bundle = deserialize_bundle(text)

    if cache is not None:
        _cache_store(cache, clip_id, registry.fingerprint(), text)
    return bundle


def _cache_paths(cache: Path, clip_id: str) -> tuple[Path, Path]:
    return (
        cache / f"{clip_id}.features.json",
        cache / f"{clip_id}.features.meta.json",
    )


def _cache_load(cache: Path, clip_id: str, fingerprint: str) -> FeatureBundle | None:
    data_path, meta_path = _cache_paths(cache, clip_id)
    if not data_path.exists() or not meta_path.exists():
        return None
    try:
        meta = json.loads(meta_path.read_text())
    except (OSError, ValueError):
        return None
    if meta.get("fingerprint") != fingerprint:
        return None
    return deserialize_bundle(data_path.read_text())


def _cache_store(cache: Path, clip_id: str, fingerprint: str, text: str) -> None:
    cache.mkdir(parents=True, exist_ok=True)
    data_path, meta_path = _cache_paths(cache, clip_id)
    _atomic_write(data_path, text)
    meta = json.dumps({"clip_id": clip_id, "fingerprint": fingerprint}, sort_keys=True)
    _atomic_write(meta_path, meta)


def ingest_precomputed(path: str | Path) -> FeatureBundle:
    """Load and validate a canonical feature JSON file.

    Raises:
        ParseError: unreadable or malformed JSON.
        SchemaVersionMismatch: unknown schema_version.
        InvalidBundle: content violates bundle invariants.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return deserialize_bundle(text)


@dataclass(frozen=True)
class RoutingConfig:
    """Thresholded tag labels that gate the music and speech layers."""

    music_labels: frozenset[str] = frozenset({"Music"})
    speech_labels: frozenset[str] = frozenset({"Speech"})
    music_threshold: float = 0.5
    speech_threshold: float = 0.5

    def __post_init__(self):
        if not self.music_labels or not self.speech_labels:
            raise ValueError("label sets must be nonempty")
        for name in ("music_threshold", "speech_threshold"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        object.__setattr__(self, "music_labels", frozenset(self.music_labels))
        object.__setattr__(self, "speech_labels", frozenset(self.speech_labels))


MUSIC_LAYERS = frozenset({"notes", "chords", "music_tags"})
SPEECH_LAYERS = frozenset({"transcript", "emotion"})


def detects(bundle: FeatureBundle, labels: frozenset[str], threshold: float) -> bool:
    return any(
        e.label in labels and e.confidence >= threshold for e in bundle.events
    )


def route_features(bundle: FeatureBundle, routing: RoutingConfig | None = None) -> FeatureBundle:
    """Content-aware layer filter.

    Events and metadata always pass through; music layers (notes, chords,
    music_tags) pass only when a music tag clears the threshold, speech
    layers (transcript, emotion) only when a speech tag does. Idempotent,
    never adds features.
    """
    routing = routing if routing is not None else RoutingConfig()
    keep = {"events"}
    if detects(bundle, routing.music_labels, routing.music_threshold):
        keep |= MUSIC_LAYERS
    if detects(bundle, routing.speech_labels, routing.speech_threshold):
        keep |= SPEECH_LAYERS
    return keep_layers(bundle, keep)
