"""Per-sample dynamic feature selection.

One cheap LLM call decides which feature layers are worth including for a
given question; the bundle is filtered to that subset. When the reply cannot
be parsed into layer names the rule-based routing result is used instead, and
the trace records the fallback.
"""

from __future__ import annotations

from dataclasses import dataclass

from symaudio.errors import SelectionUnparseable
from symaudio.llm import LlmClient, parse_agent_selection
from symaudio.model import LAYERS, FeatureBundle, keep_layers
from symaudio.prompts import Question, build_agent_selection_prompt
from symaudio.registry import (
    MUSIC_LAYERS,
    SPEECH_LAYERS,
    RoutingConfig,
    detects,
    route_features,
)


@dataclass(frozen=True)
class SelectionTrace:
    """Record of one selection call, persisted next to the eval result."""

    sample_id: str
    offered: frozenset[str]
    selected: frozenset[str]
    used_fallback: bool
    raw_agent_output: str

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "offered": sorted(self.offered),
            "selected": sorted(self.selected),
            "used_fallback": self.used_fallback,
            "raw_agent_output": self.raw_agent_output,
        }


def _routed_layer_set(bundle: FeatureBundle, routing: RoutingConfig) -> frozenset[str]:
    keep = {"events"}
    if detects(bundle, routing.music_labels, routing.music_threshold):
        keep |= MUSIC_LAYERS
    if detects(bundle, routing.speech_labels, routing.speech_threshold):
        keep |= SPEECH_LAYERS
    return frozenset(keep)


def select_features(
    question: Question,
    bundle: FeatureBundle,
    client: LlmClient,
    routing: RoutingConfig | None = None,
    sample_id: str = "",
) -> tuple[FeatureBundle, SelectionTrace]:
    """Ask the model which layers matter, then filter the bundle to them.

    Metadata always survives; an unusable reply falls back to
    route_features. Transport errors propagate to the caller.
    """
    routing = routing if routing is not None else RoutingConfig()
    offered = frozenset(LAYERS)
    prompt = build_agent_selection_prompt(question, bundle)
    raw = client.ask(prompt.text, max_tokens=64).text
    try:
        selected = frozenset(parse_agent_selection(raw, offered))
        filtered = keep_layers(bundle, set(selected))
        used_fallback = False
    except SelectionUnparseable:
        selected = _routed_layer_set(bundle, routing)
        filtered = route_features(bundle, routing)
        used_fallback = True
    trace = SelectionTrace(
        sample_id=sample_id,
        offered=offered,
        selected=selected,
        used_fallback=used_fallback,
        raw_agent_output=raw,
    )
    return filtered, trace
