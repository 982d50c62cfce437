"""Deterministic prompt composition.

A prompt is the concatenation of a metadata block, one titled section per
nonempty feature layer, the question with lettered options, and a fixed
instruction block. Every builder here is a pure function of its inputs, so
equal inputs yield byte-equal prompts; the exact wording is frozen by the
golden files under fixtures/prompts/.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from symaudio.errors import EmptyCaption, EmptyQuestion, InvalidBundle
from symaudio.model import (
    LAYERS,
    FeatureBundle,
    feature_content,
    feature_span,
    validate_bundle,
)
from symaudio.serialize import format_seconds

CATEGORIES = ("sound", "music", "speech", "mixed")

SECTION_TITLES = {
    "events": "SOUND EVENTS",
    "transcript": "TRANSCRIPT",
    "emotion": "EMOTION",
    "notes": "NOTES",
    "chords": "CHORDS",
    "music_tags": "MUSIC TAGS",
}
_LAYER_OF_TITLE = {title: layer for layer, title in SECTION_TITLES.items()}

ANSWER_INSTRUCTION = "Answer with exactly one option letter. Do not explain."
CAPTION_INSTRUCTION = (
    "Write one fluent paragraph describing this audio scene. "
    "Mention timing and order of events. Do not answer any question."
)
SELECTION_INSTRUCTION = (
    "Reply with a comma-separated list of the feature layer names that help "
    "answer the question. Use only names from the list above. Do not explain."
)

# Bounds the densest layer (notes); overflow is summarized, never dropped
# silently.
MAX_LINES_PER_LAYER = 200
MAX_OPTIONS = 10  # letters A through J

_FEATURE_LINE = re.compile(r"^\[(\d+\.\d{3})–(\d+\.\d{3})\] (.+)$")


@dataclass(frozen=True)
class Question:
    """A multiple-choice question over one audio clip."""

    text: str
    options: tuple[str, ...]
    category: str = "sound"


class PromptStyle(str, enum.Enum):
    FLAT = "flat"
    CAPTION_STAGE1 = "caption_stage1"
    CAPTION_STAGE2 = "caption_stage2"
    AGENT_SELECTION = "agent_selection"


@dataclass(frozen=True)
class Prompt:
    text: str
    style: PromptStyle
    included_layers: frozenset[str] = field(default_factory=frozenset)
    feature_manifest: tuple[tuple[str, int], ...] = ()


def option_letter(index: int) -> str:
    return chr(ord("A") + index)


def validate_question(question: Question) -> None:
    """Reject malformed questions before any rendering happens."""
    if not question.text.strip():
        raise EmptyQuestion("question text is empty")
    n = len(question.options)
    if n < 2:
        raise EmptyQuestion(f"need at least 2 options, got {n}")
    if n > MAX_OPTIONS:
        raise EmptyQuestion(f"at most {MAX_OPTIONS} options supported, got {n}")
    if len(set(question.options)) != n:
        raise EmptyQuestion("options must be distinct")
    for opt in question.options:
        if not opt.strip():
            raise EmptyQuestion("blank option text")
        if "\n" in opt or "\r" in opt:
            raise EmptyQuestion("option text must be a single line")
    if question.category not in CATEGORIES:
        raise EmptyQuestion(f"unknown category {question.category!r}")


def _require_valid(bundle: FeatureBundle) -> None:
    report = validate_bundle(bundle)
    if report:
        raise InvalidBundle(report)


def _metadata_block(bundle: FeatureBundle) -> str:
    return f"METADATA\nduration: {format_seconds(bundle.metadata.duration_s)} s"


def _feature_sections(bundle: FeatureBundle) -> list[str]:
    duration = bundle.metadata.duration_s
    sections = []
    for layer in LAYERS:
        items = bundle.layer_items(layer)
        if not items:
            continue
        lines = [SECTION_TITLES[layer]]
        for item in items[:MAX_LINES_PER_LAYER]:
            start, end = feature_span(layer, item, duration)
            lines.append(
                f"[{format_seconds(start)}–{format_seconds(end)}] "
                f"{feature_content(layer, item)}"
            )
        overflow = len(items) - MAX_LINES_PER_LAYER
        if overflow > 0:
            lines.append(f"… and {overflow} more")
        sections.append("\n".join(lines))
    return sections


def _question_block(question: Question) -> str:
    lines = ["QUESTION", question.text]
    lines += [
        f"({option_letter(i)}) {opt}" for i, opt in enumerate(question.options)
    ]
    return "\n".join(lines)


def _manifest(bundle: FeatureBundle) -> tuple[tuple[str, int], ...]:
    return tuple(
        (layer, len(bundle.layer_items(layer)))
        for layer in LAYERS
        if bundle.layer_items(layer)
    )


def _join(blocks: list[str]) -> str:
    return "\n\n".join(blocks) + "\n"


def build_flat_prompt(bundle: FeatureBundle, question: Question) -> Prompt:
    """Flat style: metadata, every nonempty feature section, question, answer
    instruction."""
    _require_valid(bundle)
    validate_question(question)
    blocks = [_metadata_block(bundle)]
    blocks += _feature_sections(bundle)
    blocks.append(_question_block(question))
    blocks.append(ANSWER_INSTRUCTION)
    return Prompt(
        text=_join(blocks),
        style=PromptStyle.FLAT,
        included_layers=frozenset(bundle.nonempty_layers()),
        feature_manifest=_manifest(bundle),
    )


def build_caption_prompt(bundle: FeatureBundle) -> Prompt:
    """Caption stage 1: the same feature sections, asking for a paragraph."""
    _require_valid(bundle)
    blocks = [_metadata_block(bundle)]
    blocks += _feature_sections(bundle)
    blocks.append(CAPTION_INSTRUCTION)
    return Prompt(
        text=_join(blocks),
        style=PromptStyle.CAPTION_STAGE1,
        included_layers=frozenset(bundle.nonempty_layers()),
        feature_manifest=_manifest(bundle),
    )


def build_caption_reasoning_prompt(caption: str, question: Question) -> Prompt:
    """Caption stage 2: the generated caption replaces the feature sections."""
    caption = caption.strip()
    if not caption:
        raise EmptyCaption("caption is empty")
    validate_question(question)
    blocks = [
        f"CAPTION\n{caption}",
        _question_block(question),
        ANSWER_INSTRUCTION,
    ]
    return Prompt(text=_join(blocks), style=PromptStyle.CAPTION_STAGE2)


def build_agent_selection_prompt(
    question: Question, bundle: FeatureBundle
) -> Prompt:
    """Selection call: question text plus per-layer counts, no feature content."""
    _require_valid(bundle)
    validate_question(question)
    inventory = ["AVAILABLE FEATURE LAYERS (name: feature count)"]
    inventory += [
        f"{layer}: {len(bundle.layer_items(layer))}" for layer in LAYERS
    ]
    blocks = [
        f"QUESTION\n{question.text}",
        "\n".join(inventory),
        SELECTION_INSTRUCTION,
    ]
    return Prompt(
        text=_join(blocks),
        style=PromptStyle.AGENT_SELECTION,
        included_layers=frozenset(LAYERS),
        feature_manifest=tuple(
            (layer, len(bundle.layer_items(layer))) for layer in LAYERS
        ),
    )


def parse_prompt_features(text: str) -> list[tuple[str, float, float, str]]:
    """Recover (layer, start, end, content) from a rendered prompt.

    Inverse of the feature sections of the flat and caption-stage-1 templates;
    overflow summary lines are skipped. Layers render at most
    MAX_LINES_PER_LAYER features, so the round trip is exact only below the
    cap.
    """
    current: str | None = None
    out = []
    for line in text.splitlines():
        if line in _LAYER_OF_TITLE:
            current = _LAYER_OF_TITLE[line]
            continue
        if line in ("METADATA", "QUESTION", "CAPTION"):
            current = None
            continue
        if current is None:
            continue
        match = _FEATURE_LINE.match(line)
        if match:
            out.append(
                (current, float(match.group(1)), float(match.group(2)), match.group(3))
            )
    return out
