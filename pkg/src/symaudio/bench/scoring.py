"""Accuracy scoring with the table formats used for reporting.

Overall accuracy renders at one decimal and per-category at two, both with
half-up rounding; empty cells render as an em-height dash. Scores are
computed from (correct, n) counts so the same code path serves live results
and stored regression fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from symaudio.bench.loaders import QASample
from symaudio.bench.runner import EvalResult
from symaudio.errors import DuplicateSampleId
from symaudio.prompts import CATEGORIES

UNDEFINED = "—"  # rendered accuracy of an empty cell


def format_accuracy(correct: int, n: int, decimals: int) -> str:
    if n == 0:
        return UNDEFINED
    step = Decimal(1).scaleb(-decimals)
    value = (Decimal(correct) * 100 / Decimal(n)).quantize(step, rounding=ROUND_HALF_UP)
    return str(value)


@dataclass(frozen=True)
class CategoryScore:
    n: int
    correct: int

    @property
    def accuracy(self) -> str:
        return format_accuracy(self.correct, self.n, decimals=2)


@dataclass(frozen=True)
class ScoreReport:
    per_category: dict[str, CategoryScore]
    n_parse_errors: int = 0

    @property
    def overall_n(self) -> int:
        return sum(c.n for c in self.per_category.values())

    @property
    def overall_correct(self) -> int:
        return sum(c.correct for c in self.per_category.values())

    @property
    def overall_accuracy(self) -> str:
        return format_accuracy(self.overall_correct, self.overall_n, decimals=1)

    def to_dict(self) -> dict:
        return {
            "overall": {
                "n": self.overall_n,
                "correct": self.overall_correct,
                "accuracy": self.overall_accuracy,
            },
            "per_category": {
                cat: {"n": s.n, "correct": s.correct, "accuracy": s.accuracy}
                for cat, s in self.per_category.items()
            },
            "n_parse_errors": self.n_parse_errors,
        }


def score_from_counts(
    counts: dict[str, tuple[int, int]], n_parse_errors: int = 0
) -> ScoreReport:
    """Build a report from per-category (correct, n) pairs."""
    per_category = {}
    for category in CATEGORIES:
        correct, n = counts.get(category, (0, 0))
        if correct < 0 or n < 0 or correct > n:
            raise ValueError(f"bad counts for {category}: correct={correct} n={n}")
        per_category[category] = CategoryScore(n=n, correct=correct)
    return ScoreReport(per_category=per_category, n_parse_errors=n_parse_errors)


def score(results: list[EvalResult], samples: list[QASample]) -> ScoreReport:
    """Accuracy over the results, recomputed against the gold indices.

    Raises:
        DuplicateSampleId: repeated sample id among results or samples.
        ValueError: a result references a sample id not in samples.
    """
    by_id: dict[str, QASample] = {}
    for sample in samples:
        if sample.sample_id in by_id:
            raise DuplicateSampleId(f"duplicate sample id {sample.sample_id!r}")
        by_id[sample.sample_id] = sample

    seen: set[str] = set()
    tallies = {cat: [0, 0] for cat in CATEGORIES}  # [correct, n]
    n_parse_errors = 0
    for result in results:
        if result.sample_id in seen:
            raise DuplicateSampleId(f"duplicate result for {result.sample_id!r}")
        seen.add(result.sample_id)
        sample = by_id.get(result.sample_id)
        if sample is None:
            raise ValueError(f"result for unknown sample {result.sample_id!r}")
        correct = (
            result.predicted_index is not None
            and result.predicted_index == sample.gold_index
        )
        tally = tallies[sample.question.category]
        tally[0] += int(correct)
        tally[1] += 1
        n_parse_errors += int(result.parse_error)
    return score_from_counts(
        {cat: (c, n) for cat, (c, n) in tallies.items()},
        n_parse_errors=n_parse_errors,
    )


def render_markdown(report: ScoreReport, title: str = "Results") -> str:
    """Accuracy table in the usual one-row layout."""
    cats = list(CATEGORIES)
    header = "| " + " | ".join(c.capitalize() for c in cats) + " | Overall |"
    rule = "|" + "---:|" * (len(cats) + 1)
    accuracy = (
        "| "
        + " | ".join(report.per_category[c].accuracy for c in cats)
        + f" | {report.overall_accuracy} |"
    )
    counts = (
        "| "
        + " | ".join(str(report.per_category[c].n) for c in cats)
        + f" | {report.overall_n} |"
    )
    return "\n".join(
        [
            f"# {title}",
            "",
            header,
            rule,
            accuracy,
            counts,
            "",
            f"Parse errors: {report.n_parse_errors}",
            "",
        ]
    )
