"""Feature-level error attribution.

Incorrect samples are partitioned into exactly one of three classes:
parse_error (the model's reply was unusable), missing_feature_evidence (a
temporal-order question whose gold sequence mentions items absent from every
rendered feature line), and reasoning_failure (the evidence was present but
the answer was wrong). Temporal-order questions are detected mechanically:
all options split into the same multiset of items.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from symaudio.bench.loaders import QASample
from symaudio.bench.runner import EvalResult
from symaudio.model import FeatureBundle, feature_content
from symaudio.prompts import Question

PARSE_ERROR = "parse_error"
MISSING_EVIDENCE = "missing_feature_evidence"
REASONING_FAILURE = "reasoning_failure"
CLASSIFICATIONS = (PARSE_ERROR, MISSING_EVIDENCE, REASONING_FAILURE)

# Separators that join items inside one temporal-order option.
_ITEM_SPLIT = re.compile(r",|;|→|->|\bthen\b", re.IGNORECASE)
_WS = re.compile(r"\s+")


def normalize_item(text: str) -> str:
    """Case, underscore, hyphen, and whitespace insensitive comparison form."""
    text = text.lower().replace("_", " ").replace("-", " ")
    return _WS.sub(" ", text).strip(" .")


def split_items(option: str) -> tuple[str, ...]:
    return tuple(
        item for part in _ITEM_SPLIT.split(option) if (item := normalize_item(part))
    )


def is_temporal_order(question: Question) -> bool:
    """True when the options are permutations of one item multiset."""
    item_lists = [split_items(opt) for opt in question.options]
    if any(len(items) < 2 for items in item_lists):
        return False
    reference = Counter(item_lists[0])
    return all(Counter(items) == reference for items in item_lists[1:])


@dataclass(frozen=True)
class ErrorEntry:
    sample_id: str
    classification: str
    included_layers: tuple[str, ...]
    available_layers: tuple[str, ...]
    gold_items: tuple[str, ...] = ()
    missing_items: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "classification": self.classification,
            "included_layers": list(self.included_layers),
            "available_layers": list(self.available_layers),
            "gold_items": list(self.gold_items),
            "missing_items": list(self.missing_items),
        }


@dataclass(frozen=True)
class ErrorReport:
    entries: tuple[ErrorEntry, ...]
    n_results: int

    @property
    def by_flag(self) -> dict[str, int]:
        counts = {flag: 0 for flag in CLASSIFICATIONS}
        for entry in self.entries:
            counts[entry.classification] += 1
        return counts

    @property
    def by_layer(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for entry in self.entries:
            for layer in entry.included_layers:
                counts[layer] = counts.get(layer, 0) + 1
        return dict(sorted(counts.items()))

    def to_dict(self) -> dict:
        return {
            "n_results": self.n_results,
            "n_incorrect": len(self.entries),
            "by_flag": self.by_flag,
            "by_layer": self.by_layer,
            "samples": [entry.to_dict() for entry in self.entries],
        }


def _evidence_text(bundle: FeatureBundle | None, layers: tuple[str, ...]) -> str:
    if bundle is None:
        return ""
    lines = []
    for layer in layers:
        for item in bundle.layer_items(layer):
            lines.append(normalize_item(feature_content(layer, item)))
    return "\n".join(lines)


def analyze_errors(
    results: list[EvalResult],
    bundles: dict[str, FeatureBundle],
    samples: list[QASample],
) -> ErrorReport:
    """Classify every incorrect result; correct samples produce no entry."""
    by_id = {sample.sample_id: sample for sample in samples}
    entries = []
    for result in results:
        sample = by_id.get(result.sample_id)
        if sample is None:
            raise ValueError(f"result for unknown sample {result.sample_id!r}")
        correct = (
            result.predicted_index is not None
            and result.predicted_index == sample.gold_index
        )
        if correct:
            continue
        bundle = bundles.get(result.sample_id)
        available = tuple(sorted(bundle.nonempty_layers())) if bundle else ()
        gold_items: tuple[str, ...] = ()
        missing: tuple[str, ...] = ()
        if result.parse_error:
            classification = PARSE_ERROR
        elif is_temporal_order(sample.question):
            gold_items = split_items(sample.question.options[sample.gold_index])
            evidence = _evidence_text(bundle, result.included_layers)
            missing = tuple(item for item in gold_items if item not in evidence)
            classification = MISSING_EVIDENCE if missing else REASONING_FAILURE
        else:
            classification = REASONING_FAILURE
        entries.append(
            ErrorEntry(
                sample_id=result.sample_id,
                classification=classification,
                included_layers=result.included_layers,
                available_layers=available,
                gold_items=gold_items,
                missing_items=missing,
            )
        )
    return ErrorReport(entries=tuple(entries), n_results=len(results))
