"""symaudio: symbolic audio features, deterministic prompts, and
multiple-choice reasoning evaluation.

The pipeline turns an audio clip into time-aligned symbolic features
(events, transcript, emotion, notes, chords, music tags), renders them into
reproducible prompts, asks a pluggable chat-completion model, and scores the
answers with per-category accuracy and feature-level error attribution.
"""

from symaudio.agent import SelectionTrace, select_features
from symaudio.bench import (
    ErrorReport,
    EvalResult,
    QASample,
    ScoreReport,
    analyze_errors,
    load_benchmark,
    run_eval,
    score,
)
from symaudio.emotion import EMOTION_VOCABULARY, discretize_emotion
from symaudio.llm import (
    EndpointConfig,
    LlmClient,
    LlmRequest,
    LlmResponse,
    parse_agent_selection,
    parse_answer,
)
from symaudio.model import (
    CHORD_SYMBOLS,
    LAYERS,
    PITCH_CLASSES,
    ChordSegment,
    ClipMetadata,
    EmotionLabel,
    EventTag,
    FeatureBundle,
    MusicTag,
    NoteEvent,
    Provenance,
    TranscriptSegment,
    Violation,
    keep_layers,
    render_timeline,
    validate_bundle,
)
from symaudio.prompts import (
    Prompt,
    PromptStyle,
    Question,
    build_agent_selection_prompt,
    build_caption_prompt,
    build_caption_reasoning_prompt,
    build_flat_prompt,
    parse_prompt_features,
)
from symaudio.registry import (
    ExtractorDescriptor,
    Registry,
    RoutingConfig,
    extract_all,
    ingest_precomputed,
    native_registry,
    route_features,
)
from symaudio.serialize import SCHEMA_VERSION, deserialize_bundle, serialize_bundle

__version__ = "0.1.0"

__all__ = [
    "CHORD_SYMBOLS",
    "EMOTION_VOCABULARY",
    "LAYERS",
    "PITCH_CLASSES",
    "SCHEMA_VERSION",
    "ChordSegment",
    "ClipMetadata",
    "EmotionLabel",
    "EndpointConfig",
    "ErrorReport",
    "EvalResult",
    "EventTag",
    "ExtractorDescriptor",
    "FeatureBundle",
    "LlmClient",
    "LlmRequest",
    "LlmResponse",
    "MusicTag",
    "NoteEvent",
    "Prompt",
    "PromptStyle",
    "Provenance",
    "QASample",
    "Question",
    "Registry",
    "RoutingConfig",
    "ScoreReport",
    "SelectionTrace",
    "TranscriptSegment",
    "Violation",
    "analyze_errors",
    "build_agent_selection_prompt",
    "build_caption_prompt",
    "build_caption_reasoning_prompt",
    "build_flat_prompt",
    "deserialize_bundle",
    "discretize_emotion",
    "extract_all",
    "ingest_precomputed",
    "keep_layers",
    "load_benchmark",
    "native_registry",
    "parse_agent_selection",
    "parse_answer",
    "parse_prompt_features",
    "render_timeline",
    "route_features",
    "run_eval",
    "score",
    "select_features",
    "serialize_bundle",
    "validate_bundle",
]
