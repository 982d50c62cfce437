"""Batch evaluation with streaming persistence and resume.

Samples run on a bounded worker pool; each finished result is appended to a
results file as one JSON line under a single-writer lock, so a killed run
loses at most the in-flight samples. Re-running with the same results file
skips every persisted sample id and issues no LLM calls for them.
"""

from __future__ import annotations

import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path

from symaudio.agent import SelectionTrace, select_features
from symaudio.bench.loaders import QASample
from symaudio.errors import (
    AnswerUnparseable,
    EmptyCaption,
    MalformedResponse,
    RateLimitedExhausted,
    TransportFailure,
)
from symaudio.llm import LlmClient, parse_answer
from symaudio.model import FeatureBundle
from symaudio.prompts import (
    build_caption_prompt,
    build_caption_reasoning_prompt,
    build_flat_prompt,
)
from symaudio.registry import RoutingConfig, route_features

RUN_STYLES = ("flat", "flat+agent", "caption", "caption+agent")

# Failures that degrade one sample instead of aborting the run; credential
# problems still abort because every later sample would fail identically.
_SAMPLE_ERRORS = (TransportFailure, RateLimitedExhausted, MalformedResponse)


@dataclass(frozen=True)
class EvalResult:
    sample_id: str
    predicted_index: int | None
    correct: bool
    parse_error: bool
    raw_output: str
    prompt_style: str
    included_layers: tuple[str, ...]
    selection_trace: SelectionTrace | None = None
    timing_ms: int = 0
    flags: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "predicted_index": self.predicted_index,
            "correct": self.correct,
            "parse_error": self.parse_error,
            "raw_output": self.raw_output,
            "prompt_style": self.prompt_style,
            "included_layers": list(self.included_layers),
            "selection_trace": self.selection_trace.to_dict() if self.selection_trace else None,
            "timing_ms": self.timing_ms,
            "flags": list(self.flags),
        }


def result_from_dict(payload: dict) -> EvalResult:
    trace = payload.get("selection_trace")
    selection = None
    if trace is not None:
        selection = SelectionTrace(
            sample_id=trace["sample_id"],
            offered=frozenset(trace["offered"]),
            selected=frozenset(trace["selected"]),
            used_fallback=bool(trace["used_fallback"]),
            raw_agent_output=trace["raw_agent_output"],
        )
    predicted = payload["predicted_index"]
    return EvalResult(
        sample_id=payload["sample_id"],
        predicted_index=int(predicted) if predicted is not None else None,
        correct=bool(payload["correct"]),
        parse_error=bool(payload["parse_error"]),
        raw_output=payload.get("raw_output", ""),
        prompt_style=payload.get("prompt_style", "flat"),
        included_layers=tuple(payload.get("included_layers", ())),
        selection_trace=selection,
        timing_ms=int(payload.get("timing_ms", 0)),
        flags=tuple(payload.get("flags", ())),
    )


def load_results(path: str | Path) -> list[EvalResult]:
    """Read persisted results, tolerating a truncated final line."""
    results = []
    path = Path(path)
    if not path.exists():
        return results
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        try:
            results.append(result_from_dict(json.loads(line)))
        except (ValueError, KeyError):
            continue  # interrupted write; the sample simply reruns
    return results


def _eval_one(
    sample: QASample,
    bundle: FeatureBundle,
    client: LlmClient,
    style: str,
    routing: RoutingConfig,
) -> EvalResult:
    started = time.monotonic()
    agent = style.endswith("+agent")
    routed = route_features(bundle, routing)
    trace = None
    predicted: int | None = None
    parse_error = False
    raw = ""
    included: tuple[str, ...] = ()
    try:
        if agent:
            routed, trace = select_features(
                sample.question, routed, client, routing, sample.sample_id
            )
        if style.startswith("caption"):
            stage1 = build_caption_prompt(routed)
            included = tuple(sorted(stage1.included_layers))
            caption = client.ask(stage1.text).text
            stage2 = build_caption_reasoning_prompt(caption, sample.question)
            raw = client.ask(stage2.text).text
        else:
            prompt = build_flat_prompt(routed, sample.question)
            included = tuple(sorted(prompt.included_layers))
            raw = client.ask(prompt.text).text
        predicted = parse_answer(raw, sample.question.options)
    except (AnswerUnparseable, EmptyCaption):
        predicted, parse_error = None, True
    except _SAMPLE_ERRORS as exc:
        predicted, parse_error = None, False
        raw = f"<llm-error> {exc}"
    elapsed_ms = int(round((time.monotonic() - started) * 1000))
    return EvalResult(
        sample_id=sample.sample_id,
        predicted_index=predicted,
        correct=predicted is not None and predicted == sample.gold_index,
        parse_error=parse_error,
        raw_output=raw,
        prompt_style=style,
        included_layers=included,
        selection_trace=trace,
        timing_ms=elapsed_ms,
        flags=sample.flags,
    )


def run_eval(
    samples: list[QASample],
    client: LlmClient,
    bundle_provider,
    style: str = "flat",
    routing: RoutingConfig | None = None,
    workers: int = 4,
    results_path: str | Path | None = None,
) -> list[EvalResult]:
    """Evaluate every sample, resuming past work from results_path.

    bundle_provider is a callable QASample -> FeatureBundle. Per-sample
    failures (unparseable answers, transport exhaustion) are captured in the
    result; they never abort the run. Returns results for all input samples
    in input order, merging freshly computed and previously persisted ones.
    """
    if style not in RUN_STYLES:
        raise ValueError(f"unknown style {style!r}; expected one of {RUN_STYLES}")
    routing = routing if routing is not None else RoutingConfig()

    done: dict[str, EvalResult] = {}
    if results_path is not None:
        for result in load_results(results_path):
            done[result.sample_id] = result
    pending = [s for s in samples if s.sample_id not in done]

    sink = None
    lock = threading.Lock()
    if results_path is not None:
        Path(results_path).parent.mkdir(parents=True, exist_ok=True)
        sink = open(results_path, "a")

    def worker(sample: QASample) -> EvalResult:
        bundle = bundle_provider(sample)
        return _eval_one(sample, bundle, client, style, routing)

    try:
        if pending:
            with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
                futures = {pool.submit(worker, s): s for s in pending}
                for future in as_completed(futures):
                    result = future.result()
                    done[result.sample_id] = result
                    if sink is not None:
                        line = json.dumps(result.to_dict(), sort_keys=True)
                        with lock:
                            sink.write(line + "\n")
                            sink.flush()
    finally:
        if sink is not None:
            sink.close()

    return [done[s.sample_id] for s in samples]
