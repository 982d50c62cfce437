"""Benchmark adapters: field mapping, gold resolution, category normalization."""

from __future__ import annotations

import json

import pytest

from symaudio.bench.loaders import (
    FORMATS,
    load_benchmark,
    normalize_category,
    resolve_gold,
)
from symaudio.errors import (
    DuplicateSampleId,
    ParseError,
    UnknownFormat,
    UnresolvableGold,
)


def _write(tmp_path, records, name="bench.json", jsonl=False):
    path = tmp_path / name
    if jsonl:
        path.write_text("\n".join(json.dumps(r) for r in records) + "\n")
    else:
        path.write_text(json.dumps(records))
    return path


MMAU = {
    "id": "mmau-001",
    "audio_id": "clips/a.wav",
    "question": "What is heard?",
    "choices": ["Rain", "Wind"],
    "answer": "Rain",
    "task": "sound",
}

MMAR = {
    "id": "mmar-7",
    "audio_path": "clips/b.wav",
    "question": "Which chord opens the piece?",
    "choices": ["C major", "A minor", "E minor"],
    "answer": "A minor",
    "modality": "music",
}

OMNIBENCH = {
    "index": 42,
    "audio_file": "clips/c.wav",
    "image_file": "frames/c.png",
    "question": "What happens?",
    "options": ["A door closes", "A phone rings"],
    "answer": "A phone rings",
    "task_type": "sound-music",
}

CUSTOM = {
    "sample_id": "s1",
    "clip_ref": "clips/d.wav",
    "question": "Who speaks first?",
    "options": ["A man", "A woman"],
    "gold_index": 1,
    "category": "speech",
}


def test_mmau_adapter(tmp_path):
    samples = load_benchmark(_write(tmp_path, [MMAU]), "mmau")
    assert len(samples) == 1
    s = samples[0]
    assert s.sample_id == "mmau-001"
    assert s.clip_ref == "clips/a.wav"
    assert s.question.text == "What is heard?"
    assert s.question.options == ("Rain", "Wind")
    assert s.question.category == "sound"
    assert s.gold_index == 0
    assert s.benchmark == "mmau"
    assert s.flags == () and s.extras == ()


def test_mmar_adapter_and_generated_ids(tmp_path):
    anon = dict(MMAR)
    del anon["id"]
    samples = load_benchmark(_write(tmp_path, [MMAR, anon | {"answer": "C major"}]), "mmar")
    assert samples[0].sample_id == "mmar-7"
    assert samples[1].sample_id == "mmar-00001"
    assert samples[0].gold_index == 1
    assert samples[0].question.category == "music"


def test_omnibench_adapter_degrades_image_samples(tmp_path):
    samples = load_benchmark(_write(tmp_path, [OMNIBENCH]), "omnibench")
    s = samples[0]
    assert s.sample_id == "42"
    assert s.gold_index == 1
    assert s.question.category == "mixed"  # sound-music collapses to mixed
    assert s.flags == ("audio_only_degraded",)
    assert dict(s.extras) == {"image": "frames/c.png"}

    plain = dict(OMNIBENCH)
    del plain["image_file"]
    s2 = load_benchmark(_write(tmp_path, [plain]), "omnibench")[0]
    assert s2.flags == () and s2.extras == ()


def test_custom_adapter_accepts_index_or_text_gold(tmp_path):
    by_text = dict(CUSTOM, sample_id="s2")
    del by_text["gold_index"]
    by_text["answer"] = "A man"
    samples = load_benchmark(_write(tmp_path, [CUSTOM, by_text]), "custom")
    assert samples[0].gold_index == 1
    assert samples[1].gold_index == 0
    assert samples[0].question.category == "speech"


def test_jsonl_and_array_forms_agree(tmp_path):
    records = [MMAU, dict(MMAU, id="mmau-002", answer="Wind")]
    array = load_benchmark(_write(tmp_path, records, name="a.json"), "mmau")
    lines = load_benchmark(_write(tmp_path, records, name="b.jsonl", jsonl=True), "mmau")
    assert array == lines


def test_unknown_format_rejected(tmp_path):
    path = _write(tmp_path, [MMAU])
    with pytest.raises(UnknownFormat):
        load_benchmark(path, "imagenet")
    assert "imagenet" not in FORMATS


def test_missing_file_and_bad_json(tmp_path):
    with pytest.raises(ParseError):
        load_benchmark(tmp_path / "absent.json", "mmau")
    bad = tmp_path / "bad.json"
    bad.write_text("[{broken")
    with pytest.raises(ParseError):
        load_benchmark(bad, "mmau")
    scalar = tmp_path / "scalar.json"
    scalar.write_text("[1, 2]")
    with pytest.raises(ParseError):
        load_benchmark(scalar, "mmau")


def test_missing_required_field(tmp_path):
    incomplete = dict(MMAU)
    del incomplete["question"]
    with pytest.raises(ParseError, match="question"):
        load_benchmark(_write(tmp_path, [incomplete]), "mmau")


def test_invalid_question_wrapped_as_parse_error(tmp_path):
    one_option = dict(MMAU, choices=["Rain"], answer="Rain")
    with pytest.raises(ParseError):
        load_benchmark(_write(tmp_path, [one_option]), "mmau")


def test_duplicate_sample_ids_rejected(tmp_path):
    with pytest.raises(DuplicateSampleId):
        load_benchmark(_write(tmp_path, [MMAU, MMAU]), "mmau")


def test_resolve_gold_branches():
    options = ("Rain", "Wind", "Hail")
    assert resolve_gold(2, options) == 2
    assert resolve_gold(" Wind ", options) == 1
    with pytest.raises(UnresolvableGold):
        resolve_gold(3, options)  # out of range
    with pytest.raises(UnresolvableGold):
        resolve_gold(True, options)  # bool is not an index
    with pytest.raises(UnresolvableGold):
        resolve_gold("Snow", options)  # no match
    with pytest.raises(UnresolvableGold):
        resolve_gold("Rain", ("Rain", "Rain "))  # strip makes both match
    with pytest.raises(UnresolvableGold):
        resolve_gold(1.5, options)


def test_normalize_category():
    assert normalize_category("Sounds") == "sound"
    assert normalize_category("audio") == "sound"
    assert normalize_category("VOICE") == "speech"
    assert normalize_category("mix") == "mixed"
    assert normalize_category("music_and_speech") == "mixed"
    assert normalize_category("sound/music/speech") == "mixed"
    with pytest.raises(ParseError):
        normalize_category("percussion")
    with pytest.raises(ParseError):
        normalize_category("sound and percussion")
