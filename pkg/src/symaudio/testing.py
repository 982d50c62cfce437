"""Deterministic test doubles: random valid bundles and mock LLM transports.

The bundle generator quantizes every real value to milliseconds (or 1/1000
for confidences) so canonical serialization round-trips byte-stably. The
transports plug into LlmClient in place of HTTP and are thread-safe, so the
evaluation runner can be exercised under real concurrency without a network.
"""

from __future__ import annotations

import random
import threading
from dataclasses import replace

from symaudio.emotion import discretize_emotion
from symaudio.model import (
    CHORD_SYMBOLS,
    LAYERS,
    ChordSegment,
    ClipMetadata,
    EmotionLabel,
    EventTag,
    FeatureBundle,
    MusicTag,
    NoteEvent,
    Provenance,
    TranscriptSegment,
)
from symaudio.prompts import CAPTION_INSTRUCTION

EVENT_LABELS = ("Music", "Speech", "Dog bark", "Doorbell", "Engine", "Rain")
TAG_LABELS = ("rock", "piano", "ambient", "guitar", "electronic", "classical")
INSTRUMENTS = ("unknown", "piano", "violin", "guitar")
WORDS = ("the", "kettle", "whistles", "someone", "answers", "quietly", "again")


def _ms(rng: random.Random, lo_ms: int, hi_ms: int) -> float:
    return rng.randint(lo_ms, hi_ms) / 1000


def _span(rng: random.Random, dur_ms: int) -> tuple[float, float]:
    a, b = sorted((rng.randint(0, dur_ms), rng.randint(0, dur_ms)))
    return a / 1000, b / 1000


def random_bundle(rng: random.Random, clip_id: str = "synthetic") -> FeatureBundle:
    """One structurally valid bundle with millisecond-quantized values."""
    dur_ms = rng.randint(2000, 30000)
    duration = dur_ms / 1000

    events = tuple(
        EventTag(rng.choice(EVENT_LABELS), *_span(rng, dur_ms), _ms(rng, 0, 1000))
        for _ in range(rng.randint(0, 5))
    )

    transcript = tuple(
        TranscriptSegment(
            " ".join(rng.choice(WORDS) for _ in range(rng.randint(1, 5))),
            *_span(rng, dur_ms),
            speaker=rng.choice((None, "spk0", "spk1")),
        )
        for _ in range(rng.randint(0, 4))
    )

    emotion = None
    if rng.random() < 0.6:
        v, a, d = (_ms(rng, 0, 1000) for _ in range(3))
        emotion = EmotionLabel(v, a, d, discretize_emotion(v, a, d))

    notes = []
    for _ in range(rng.randint(0, 6)):
        onset_ms = rng.randint(0, dur_ms - 1)
        offset_ms = rng.randint(onset_ms + 1, dur_ms)
        notes.append(
            NoteEvent(
                midi_pitch=rng.randint(0, 127),
                onset_s=onset_ms / 1000,
                offset_s=offset_ms / 1000,
                instrument=rng.choice(INSTRUMENTS),
                velocity=rng.randint(0, 127),
            )
        )

    chords = []
    n_chords = rng.randint(0, 4)
    if n_chords and dur_ms > n_chords:
        cuts = sorted(rng.sample(range(1, dur_ms), n_chords - 1)) if n_chords > 1 else []
        bounds = [0, *cuts, dur_ms]
        symbols: list[str] = []
        for _ in range(n_chords):
            symbols.append(
                rng.choice([s for s in CHORD_SYMBOLS if not symbols or s != symbols[-1]])
            )
        chords = [
            ChordSegment(symbols[i], bounds[i] / 1000, bounds[i + 1] / 1000)
            for i in range(n_chords)
        ]

    music_tags = tuple(
        MusicTag(label, _ms(rng, 0, 1000))
        for label in rng.sample(TAG_LABELS, rng.randint(0, 4))
    )

    bundle = FeatureBundle(
        metadata=ClipMetadata(
            clip_id=clip_id, duration_s=duration, sample_rate_hz=rng.choice((0, 16000, 22050))
        ),
        events=events,
        transcript=transcript,
        emotion=emotion,
        notes=tuple(notes),
        chords=tuple(chords),
        music_tags=music_tags,
    )
    provenance = {
        layer: Provenance(f"gen-{layer}", "1") for layer in bundle.nonempty_layers()
    }
    return replace(bundle, extractor_provenance=provenance)


def chat_payload(text: str, finish: str = "stop") -> dict:
    return {
        "choices": [{"message": {"content": text}, "finish_reason": finish}],
        "usage": {"prompt_tokens": 1, "completion_tokens": 1},
    }


class FixedTransport:
    """Always returns the same completion text."""

    def __init__(self, text: str):
        self.text = text
        self.calls = 0
        self._lock = threading.Lock()

    def __call__(self, url, headers, body, timeout_s):
        with self._lock:
            self.calls += 1
        return 200, chat_payload(self.text)


class ScriptedTransport:
    """Replays a fixed script of responses, one per call, in order.

    Script items: a string (a 200 completion), a (status, payload) pair, or
    an Exception instance to raise as a transport failure.
    """

    def __init__(self, script):
        self._script = list(script)
        self._lock = threading.Lock()
        self.calls = 0

    def __call__(self, url, headers, body, timeout_s):
        with self._lock:
            self.calls += 1
            if not self._script:
                raise AssertionError("scripted transport exhausted")
            item = self._script.pop(0)
        if isinstance(item, Exception):
            raise item
        if isinstance(item, str):
            return 200, chat_payload(item)
        status, payload = item
        return status, payload


GIBBERISH_TEXT = "Hmm, the recording could be interpreted in several ways and nothing here stands out to me."


class GibberishTransport(FixedTransport):
    """Replies that defeat every answer-parsing rule."""

    def __init__(self):
        super().__init__(GIBBERISH_TEXT)


def _user_content(body: dict) -> str:
    for message in reversed(body.get("messages", [])):
        if message.get("role") == "user":
            return message.get("content", "")
    return ""


def _question_text(content: str) -> str | None:
    marker = "QUESTION\n"
    if marker not in content:
        return None
    return content.split(marker, 1)[1].split("\n", 1)[0]


class GoldOracleTransport:
    """Answers every reasoning prompt with its gold letter.

    Keyed on the question text rendered into the prompt; caption requests get
    a fixed paragraph and selection requests get the full layer list, so the
    oracle drives every prompt style to a correct final answer.
    """

    CAPTION_TEXT = (
        "The clip unfolds exactly as the symbolic features describe, "
        "in the stated order and timing."
    )

    def __init__(self, gold_letter_by_question: dict[str, str]):
        self._gold = dict(gold_letter_by_question)
        self._lock = threading.Lock()
        self.calls = 0

    def __call__(self, url, headers, body, timeout_s):
        with self._lock:
            self.calls += 1
        content = _user_content(body)
        if "AVAILABLE FEATURE LAYERS" in content:
            return 200, chat_payload(", ".join(LAYERS))
        if CAPTION_INSTRUCTION in content:
            return 200, chat_payload(self.CAPTION_TEXT)
        question = _question_text(content)
        if question is None or question not in self._gold:
            raise AssertionError(f"oracle has no gold answer for prompt: {content[:120]!r}")
        return 200, chat_payload(f"({self._gold[question]})")


class FlakyTransport:
    """Fails the first *failures* calls, then delegates to *inner*.

    The failure is a 500 status by default or a raised ConnectionError when
    raise_errors is set, covering both retry paths.
    """

    def __init__(self, failures: int, inner, raise_errors: bool = False):
        self._remaining = failures
        self._inner = inner
        self._raise = raise_errors
        self._lock = threading.Lock()
        self.calls = 0

    def __call__(self, url, headers, body, timeout_s):
        with self._lock:
            self.calls += 1
            fail = self._remaining > 0
            if fail:
                self._remaining -= 1
        if fail:
            if self._raise:
                raise ConnectionError("injected transport failure")
            return 500, {"error": "injected"}
        return self._inner(url, headers, body, timeout_s)


class CountingTransport:
    """Tracks the maximum number of in-flight calls through it."""

    def __init__(self, inner):
        self._inner = inner
        self._lock = threading.Lock()
        self._in_flight = 0
        self.max_in_flight = 0
        self.calls = 0

    def __call__(self, url, headers, body, timeout_s):
        with self._lock:
            self.calls += 1
            self._in_flight += 1
            self.max_in_flight = max(self.max_in_flight, self._in_flight)
        try:
            return self._inner(url, headers, body, timeout_s)
        finally:
            with self._lock:
                self._in_flight -= 1
