"""Shared plumbing for the feature sidecars.

Each sidecar is a standalone process that reads one WAV file, runs one
pretrained model (or a deterministic stub), and prints a canonical feature
JSON document on standard output with exactly one layer populated. The JSON
dialect matches schema_version 1 of the consumer's wire contract: object keys
sorted, compact separators, real-valued fields rendered as decimal strings
with exactly three fractional digits (round-half-up), lists in time order.

This package deliberately does not import the consumer. The schema mirrored
here is the whole coupling surface, so any drift shows up as a contract-test
failure rather than as a hidden shared dependency.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.io import wavfile

SCHEMA_VERSION = 1

LAYERS = ("events", "transcript", "emotion", "notes", "chords", "music_tags")

# Whole-clip RMS below this counts as silence for the stub taggers.
SILENCE_FLOOR_DBFS = -40.0

_MS = Decimal("0.001")


class SidecarError(Exception):
    """Any failure a sidecar reports on standard error before exiting nonzero."""


class ModelUnavailable(SidecarError):
    """The wrapped model (or its weights) is not installed on this machine."""


def format_seconds(value: float) -> str:
    """Render a real value with exactly 3 fractional digits, round-half-up."""
    return str(Decimal(repr(float(value))).quantize(_MS, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class SidecarManifest:
    """Identity card printed by --manifest and stamped into provenance."""

    name: str
    layer: str
    model: str
    version: str

    def __post_init__(self):
        if self.layer not in LAYERS:
            raise ValueError(f"layer must be one of {LAYERS}, got {self.layer!r}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "layer": self.layer,
            "model": self.model,
            "version": self.version,
        }


@dataclass(frozen=True)
class Clip:
    """Mono PCM samples in [-1, 1] plus where they came from."""

    samples: np.ndarray
    sample_rate_hz: int
    path: Path

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz

    @property
    def clip_id(self) -> str:
        return self.path.stem

    def is_silent(self) -> bool:
        rms = float(np.sqrt(np.mean(np.square(self.samples))))
        return rms < 10.0 ** (SILENCE_FLOOR_DBFS / 20.0)


def read_clip(path: str | Path) -> Clip:
    """Read a WAV file into a normalized mono clip.

    PCM 16-bit and 32-bit float payloads only; stereo downmixed by averaging.

    Raises:
        SidecarError: missing file, undecodable payload, or unsupported format.
    """
    path = Path(path)
    try:
        rate, data = wavfile.read(str(path))
    except FileNotFoundError as exc:
        raise SidecarError(f"no such file: {path}") from exc
    except Exception as exc:
        raise SidecarError(f"cannot decode {path}: {exc}") from exc

    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype in (np.float32, np.float64):
        samples = np.clip(data.astype(np.float64), -1.0, 1.0)
    else:
        raise SidecarError(
            f"{path}: unsupported sample format {data.dtype}; "
            "only PCM 16-bit and 32-bit float are accepted"
        )

    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    if samples.size == 0:
        raise SidecarError(f"{path}: empty audio stream")
    return Clip(samples=samples, sample_rate_hz=int(rate), path=path)


def clamp_span(start_s: float, end_s: float, duration_s: float) -> tuple[float, float]:
    """Clip a [start, end] pair to [0, duration]."""
    start = min(max(start_s, 0.0), duration_s)
    end = min(max(end_s, 0.0), duration_s)
    return start, max(start, end)


def _event_obj(e: dict) -> dict:
    return {
        "label": str(e["label"]),
        "start_s": format_seconds(e["start_s"]),
        "end_s": format_seconds(e["end_s"]),
        "confidence": format_seconds(e["confidence"]),
    }


def _segment_obj(t: dict) -> dict:
    return {
        "text": str(t["text"]),
        "start_s": format_seconds(t["start_s"]),
        "end_s": format_seconds(t["end_s"]),
        "speaker": t.get("speaker"),
    }


def _note_obj(n: dict) -> dict:
    return {
        "midi_pitch": int(n["midi_pitch"]),
        "onset_s": format_seconds(n["onset_s"]),
        "offset_s": format_seconds(n["offset_s"]),
        "instrument": str(n["instrument"]),
        "velocity": int(n["velocity"]),
    }


def _chord_obj(c: dict) -> dict:
    return {
        "symbol": str(c["symbol"]),
        "start_s": format_seconds(c["start_s"]),
        "end_s": format_seconds(c["end_s"]),
    }


def _tag_obj(m: dict) -> dict:
    return {"label": str(m["label"]), "confidence": format_seconds(m["confidence"])}


def _emotion_obj(value: dict | None) -> dict | None:
    if value is None:
        return None
    return {
        "valence": format_seconds(value["valence"]),
        "arousal": format_seconds(value["arousal"]),
        "dominance": format_seconds(value["dominance"]),
        "label": str(value["label"]),
    }


_CANONICALIZERS: dict[str, Callable] = {
    "events": lambda items: [_event_obj(e) for e in items],
    "transcript": lambda items: [_segment_obj(t) for t in items],
    "emotion": _emotion_obj,
    "notes": lambda items: [_note_obj(n) for n in items],
    "chords": lambda items: [_chord_obj(c) for c in items],
    "music_tags": lambda items: [_tag_obj(m) for m in items],
}

_EMPTY_LAYER = {
    "events": [],
    "transcript": [],
    "emotion": None,
    "notes": [],
    "chords": [],
    "music_tags": [],
}


def build_payload(clip: Clip, manifest: SidecarManifest, layer_value) -> dict:
    """Assemble a full schema_version-1 document with one populated layer."""
    payload = {
        "schema_version": SCHEMA_VERSION,
        "metadata": {
            "clip_id": clip.clip_id,
            "duration_s": format_seconds(clip.duration_s),
            "sample_rate_hz": int(clip.sample_rate_hz),
            "source_path": str(clip.path),
        },
        "extractor_provenance": {
            manifest.layer: {
                "name": manifest.name,
                "version": manifest.version,
                "error": None,
            }
        },
    }
    for layer in LAYERS:
        payload[layer] = _EMPTY_LAYER[layer]
    payload[manifest.layer] = _CANONICALIZERS[manifest.layer](layer_value)
    return payload


def emit(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def run_sidecar(
    manifest: SidecarManifest,
    stub_fn: Callable[[Clip], object],
    real_fn: Callable[[Clip], object],
    argv: list[str] | None = None,
) -> int:
    """Shared CLI: `<prog> <wav-path> [--stub]`, plus `--manifest`.

    Prints canonical feature JSON on standard output and returns 0. Any
    failure (unreadable audio, missing model) is one line on standard error
    and a nonzero return.
    """
    parser = argparse.ArgumentParser(
        prog=manifest.name,
        description=f"Emit the {manifest.layer!r} feature layer for one WAV file.",
    )
    parser.add_argument("wav", nargs="?", help="path to the input WAV file")
    parser.add_argument(
        "--stub",
        action="store_true",
        help="emit deterministic fake output instead of running the model",
    )
    parser.add_argument(
        "--manifest",
        action="store_true",
        dest="show_manifest",
        help="print the sidecar manifest and exit",
    )
    args = parser.parse_args(argv)

    if args.show_manifest:
        print(json.dumps(manifest.to_dict(), sort_keys=True))
        return 0
    if args.wav is None:
        parser.error("a WAV path is required unless --manifest is given")

    try:
        clip = read_clip(args.wav)
        layer_value = stub_fn(clip) if args.stub else real_fn(clip)
    except SidecarError as exc:
        print(f"{manifest.name}: {exc}", file=sys.stderr)
        return 1
    print(emit(build_payload(clip, manifest, layer_value)))
    return 0
