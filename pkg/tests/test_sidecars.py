"""Contract tests for the sidecar package.

The sidecars live in their own distribution and never import this package;
everything here drives them as subprocesses and checks their standard output
against the canonical JSON contract, exactly the way a CI contract test for
an external producer would.
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from symaudio.dsp.synth import as_clip, silence, tone
from symaudio.dsp.wav import write_wav
from symaudio.emotion import discretize_emotion
from symaudio.model import LAYERS, validate_bundle
from symaudio.registry import ExtractorDescriptor, Registry, extract_all
from symaudio.serialize import deserialize_bundle, serialize_bundle

SR = 22050

SIDECAR_MODULES = {
    "events": "symaudio_sidecars.events",
    "transcript": "symaudio_sidecars.transcript",
    "emotion": "symaudio_sidecars.emotion",
    "notes": "symaudio_sidecars.notes",
    "music_tags": "symaudio_sidecars.music_tags",
}


def _run(module: str, *args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", module, *args], capture_output=True, text=True
    )


@pytest.fixture()
def tone_wav(tmp_path):
    wav = tmp_path / "tone_clip.wav"
    write_wav(wav, as_clip(tone(440.0, 3.0, SR), SR))
    return wav


@pytest.fixture()
def silence_wav(tmp_path):
    wav = tmp_path / "quiet_clip.wav"
    write_wav(wav, as_clip(silence(1.0, SR), SR))
    return wav


@pytest.mark.parametrize("layer", sorted(SIDECAR_MODULES))
def test_stub_output_is_single_layer_and_valid(layer, tone_wav):
    proc = _run(SIDECAR_MODULES[layer], str(tone_wav), "--stub")
    assert proc.returncode == 0, proc.stderr
    bundle = deserialize_bundle(proc.stdout)
    assert validate_bundle(bundle) == []
    populated = [name for name in LAYERS if bundle.layer_items(name)]
    assert populated == [layer]
    assert list(bundle.extractor_provenance) == [layer]
    assert bundle.metadata.clip_id == "tone_clip"
    assert bundle.metadata.sample_rate_hz == SR


@pytest.mark.parametrize("layer", sorted(SIDECAR_MODULES))
def test_stub_output_is_deterministic_and_canonical(layer, tone_wav):
    first = _run(SIDECAR_MODULES[layer], str(tone_wav), "--stub")
    second = _run(SIDECAR_MODULES[layer], str(tone_wav), "--stub")
    assert first.stdout == second.stdout
    # Re-serializing through this package reproduces the sidecar's bytes, so
    # both sides agree on the canonical form, not just on the data.
    text = first.stdout.strip()
    assert serialize_bundle(deserialize_bundle(text)) == text


@pytest.mark.parametrize("layer", sorted(SIDECAR_MODULES))
def test_manifest_names_its_layer(layer):
    proc = _run(SIDECAR_MODULES[layer], "--manifest")
    assert proc.returncode == 0
    manifest = json.loads(proc.stdout)
    assert sorted(manifest) == ["layer", "model", "name", "version"]
    assert manifest["layer"] == layer
    assert manifest["name"] == f"sidecar-{layer.replace('_', '-')}"
    assert manifest["version"]


def test_vad_stub_label_matches_primary_discretization(tone_wav):
    proc = _run(SIDECAR_MODULES["emotion"], str(tone_wav), "--stub")
    bundle = deserialize_bundle(proc.stdout)
    emo = bundle.emotion
    assert emo is not None
    assert emo.label == discretize_emotion(emo.valence, emo.arousal, emo.dominance)


def test_silence_keeps_events_empty_but_valid(silence_wav):
    proc = _run(SIDECAR_MODULES["events"], str(silence_wav), "--stub")
    assert proc.returncode == 0
    bundle = deserialize_bundle(proc.stdout)
    assert bundle.events == ()
    assert validate_bundle(bundle) == []


def test_timestamps_clipped_to_short_clip(tmp_path):
    wav = tmp_path / "short.wav"
    write_wav(wav, as_clip(tone(440.0, 0.4, SR), SR))
    for layer in ("events", "transcript", "notes"):
        proc = _run(SIDECAR_MODULES[layer], str(wav), "--stub")
        bundle = deserialize_bundle(proc.stdout)
        duration = bundle.metadata.duration_s
        for item in bundle.layer_items(layer):
            end = item.offset_s if layer == "notes" else item.end_s
            assert end <= duration
        assert validate_bundle(bundle) == []


def test_real_mode_without_model_fails_with_message(tone_wav):
    proc = _run(SIDECAR_MODULES["transcript"], str(tone_wav))
    assert proc.returncode != 0
    assert "whisper" in proc.stderr
    assert proc.stdout == ""


def test_unreadable_wav_fails_with_message(tmp_path):
    proc = _run(SIDECAR_MODULES["events"], str(tmp_path / "absent.wav"), "--stub")
    assert proc.returncode != 0
    assert "no such file" in proc.stderr


def test_missing_wav_argument_is_a_usage_error():
    proc = _run(SIDECAR_MODULES["notes"])
    assert proc.returncode != 0
    assert proc.stdout == ""


def test_registry_consumes_sidecars_over_the_wire(tone_wav):
    # The full producer/consumer loop: this package invokes the sidecars as
    # subprocesses and merges their layers next to a native extractor.
    registry = Registry(
        [
            ExtractorDescriptor("native-chords", "chords", "native"),
            ExtractorDescriptor(
                "asr",
                "transcript",
                "sidecar",
                f"{sys.executable} -m {SIDECAR_MODULES['transcript']} --stub",
            ),
            ExtractorDescriptor(
                "vad",
                "emotion",
                "sidecar",
                f"{sys.executable} -m {SIDECAR_MODULES['emotion']} --stub",
            ),
        ]
    )
    bundle = extract_all(tone_wav, registry)
    assert [seg.text for seg in bundle.transcript] == [
        "the quick brown fox",
        "jumps over the lazy dog",
    ]
    assert bundle.emotion is not None and bundle.emotion.label == "content"
    # Provenance is stamped by the consuming registry, not passed through.
    assert bundle.extractor_provenance["transcript"].name == "asr"
    assert validate_bundle(bundle) == []
