"""Benchmark file loading.

Each supported benchmark ships its own JSON field names; a per-format adapter
maps them onto the canonical QASample shape. Gold answers given as option
text are resolved to indices by exact match on the stripped strings, and
categories are normalized to the four canonical ones.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from symaudio.errors import (
    DuplicateSampleId,
    EmptyQuestion,
    ParseError,
    UnknownFormat,
    UnresolvableGold,
)
from symaudio.prompts import Question, validate_question

FORMATS = ("mmau", "mmar", "omnibench", "custom")

_CATEGORY_ALIASES = {
    "sound": "sound",
    "sounds": "sound",
    "audio": "sound",
    "music": "music",
    "speech": "speech",
    "voice": "speech",
    "mix": "mixed",
    "mixed": "mixed",
}

_CATEGORY_PART_SPLIT = re.compile(r"[-_,/&+]|\s+and\s+|\s+")


@dataclass(frozen=True)
class QASample:
    """One benchmark item in canonical shape."""

    sample_id: str
    clip_ref: str
    question: Question
    gold_index: int
    benchmark: str
    flags: tuple[str, ...] = ()
    extras: tuple[tuple[str, str], ...] = ()


def normalize_category(value: str) -> str:
    """Map a benchmark's task/category field onto the canonical enum.

    Compound values whose parts are all known modalities (e.g.
    "sound-music") collapse to mixed.
    """
    lowered = str(value).strip().lower()
    if lowered in _CATEGORY_ALIASES:
        return _CATEGORY_ALIASES[lowered]
    parts = [p for p in _CATEGORY_PART_SPLIT.split(lowered) if p and p != "and"]
    if len(parts) >= 2 and all(p in _CATEGORY_ALIASES for p in parts):
        return "mixed"
    raise ParseError(f"unrecognized category {value!r}")


def resolve_gold(answer, options: tuple[str, ...]) -> int:
    """Answer text (or index) to option index; exact match, exactly once."""
    if isinstance(answer, bool):
        raise UnresolvableGold(f"boolean answer {answer!r}")
    if isinstance(answer, int):
        if 0 <= answer < len(options):
            return answer
        raise UnresolvableGold(f"answer index {answer} out of range")
    if not isinstance(answer, str):
        raise UnresolvableGold(f"unsupported answer shape {answer!r}")
    needle = answer.strip()
    hits = [i for i, opt in enumerate(options) if opt.strip() == needle]
    if len(hits) == 1:
        return hits[0]
    raise UnresolvableGold(
        f"answer text {answer!r} matches {len(hits)} options"
    )


def _require(record: dict, key: str, index: int):
    if key not in record:
        raise ParseError(f"record {index}: missing field {key!r}")
    return record[key]


def _adapt_mmau(record: dict, index: int) -> dict:
    return {
        "sample_id": str(_require(record, "id", index)),
        "clip_ref": str(record.get("audio_id") or record.get("audio_path") or ""),
        "question": _require(record, "question", index),
        "options": _require(record, "choices", index),
        "answer": _require(record, "answer", index),
        "category": _require(record, "task", index),
    }


def _adapt_mmar(record: dict, index: int) -> dict:
    category = record.get("category") or record.get("modality")
    if category is None:
        raise ParseError(f"record {index}: missing field 'category'")
    return {
        "sample_id": str(record.get("id") or f"mmar-{index:05d}"),
        "clip_ref": str(record.get("audio_path") or record.get("audio_id") or ""),
        "question": _require(record, "question", index),
        "options": _require(record, "choices", index),
        "answer": _require(record, "answer", index),
        "category": category,
    }


def _adapt_omnibench(record: dict, index: int) -> dict:
    options = record.get("options") or record.get("choices")
    if options is None:
        raise ParseError(f"record {index}: missing field 'options'")
    image = record.get("image_file") or record.get("image_path") or ""
    out = {
        "sample_id": str(record.get("index", record.get("id", index))),
        "clip_ref": str(record.get("audio_file") or record.get("audio_path") or ""),
        "question": _require(record, "question", index),
        "options": options,
        "answer": _require(record, "answer", index),
        "category": record.get("task_type") or record.get("task") or "mixed",
    }
    if image:
        # Image is retained but never rendered; reasoning runs audio-only.
        out["flags"] = ("audio_only_degraded",)
        out["extras"] = (("image", str(image)),)
    return out


def _adapt_custom(record: dict, index: int) -> dict:
    answer = record.get("gold_index", record.get("answer"))
    if answer is None:
        raise ParseError(f"record {index}: missing field 'answer' or 'gold_index'")
    return {
        "sample_id": str(_require(record, "sample_id", index)),
        "clip_ref": str(record.get("clip_ref") or ""),
        "question": _require(record, "question", index),
        "options": _require(record, "options", index),
        "answer": answer,
        "category": record.get("category", "sound"),
    }


_ADAPTERS = {
    "mmau": _adapt_mmau,
    "mmar": _adapt_mmar,
    "omnibench": _adapt_omnibench,
    "custom": _adapt_custom,
}


def _parse_records(text: str, path) -> list[dict]:
    stripped = text.lstrip()
    try:
        if stripped.startswith("["):
            records = json.loads(text)
        else:
            records = [
                json.loads(line) for line in text.splitlines() if line.strip()
            ]
    except ValueError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(records, list) or not all(isinstance(r, dict) for r in records):
        raise ParseError(f"{path}: expected a list of JSON objects")
    return records


def load_benchmark(path: str | Path, format: str) -> list[QASample]:
    """Parse one benchmark file into canonical samples.

    Raises:
        UnknownFormat: format is not one of FORMATS.
        ParseError: unreadable file, bad JSON, or missing/invalid fields.
        UnresolvableGold: answer matches zero or several options.
        DuplicateSampleId: two records share an id.
    """
    if format not in FORMATS:
        raise UnknownFormat(f"unknown benchmark format {format!r}")
    adapter = _ADAPTERS[format]
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc

    samples = []
    seen: set[str] = set()
    for index, record in enumerate(_parse_records(text, path)):
        fields = adapter(record, index)
        options = fields["options"]
        if not isinstance(options, (list, tuple)):
            raise ParseError(f"record {index}: options must be a list")
        options = tuple(str(opt) for opt in options)
        try:
            question = Question(
                text=str(fields["question"]),
                options=options,
                category=normalize_category(fields["category"]),
            )
            validate_question(question)
        except EmptyQuestion as exc:
            raise ParseError(f"record {index}: {exc}") from exc
        gold_index = resolve_gold(fields["answer"], options)
        sample_id = fields["sample_id"]
        if sample_id in seen:
            raise DuplicateSampleId(f"duplicate sample id {sample_id!r}")
        seen.add(sample_id)
        samples.append(
            QASample(
                sample_id=sample_id,
                clip_ref=fields["clip_ref"],
                question=question,
                gold_index=gold_index,
                benchmark=format,
                flags=fields.get("flags", ()),
                extras=fields.get("extras", ()),
            )
        )
    return samples
