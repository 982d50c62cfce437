"""Chat-completion client and constrained-output parsers.

The client speaks the common chat-completion JSON shape over HTTP POST, with
exponential-backoff retries, a global concurrency cap, and a requests-per-
minute limiter. The transport is injectable so tests and offline runs use
in-process mocks; parsing of option letters and layer selections is pure.
"""

from __future__ import annotations

import collections
import os
import re
import threading
import time
from dataclasses import dataclass, field

import requests

from symaudio.errors import (
    AnswerUnparseable,
    MalformedResponse,
    RateLimitedExhausted,
    SelectionUnparseable,
    TransportFailure,
    Unauthorized,
)

FINISH_REASONS = ("stop", "length", "error")

# Retry schedule: attempt k sleeps base * factor**(k-1) before retrying.
BACKOFF_BASE_S = 1.0
BACKOFF_FACTOR = 2.0
MAX_ATTEMPTS = 5

_RETRYABLE_STATUS = frozenset({429}) | frozenset(range(500, 600))


@dataclass(frozen=True)
class EndpointConfig:
    """Where and how to reach the model endpoint."""

    base_url: str = "http://localhost:8000/v1/chat/completions"
    model_id: str = "local-model"
    api_key_env: str = "SARLM_API_KEY"
    max_concurrency: int = 4
    requests_per_minute: int = 60
    max_attempts: int = MAX_ATTEMPTS
    backoff_base_s: float = BACKOFF_BASE_S
    backoff_factor: float = BACKOFF_FACTOR
    timeout_s: float = 60.0
    max_tokens: int = 1024


@dataclass(frozen=True)
class LlmRequest:
    model_id: str
    messages: tuple[tuple[str, str], ...]
    temperature: float = 0.0
    max_tokens: int = 1024

    def body(self) -> dict:
        return {
            "model": self.model_id,
            "messages": [
                {"role": role, "content": content}
                for role, content in self.messages
            ],
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
        }


@dataclass(frozen=True)
class LlmResponse:
    text: str
    finish_reason: str = "stop"
    latency_ms: int = 0
    prompt_tokens: int = 0
    completion_tokens: int = 0


def http_transport(url: str, headers: dict, body: dict, timeout_s: float):
    """Default transport: POST the JSON body, return (status, parsed JSON)."""
    try:
        resp = requests.post(url, headers=headers, json=body, timeout=timeout_s)
    except requests.RequestException as exc:
        raise ConnectionError(str(exc)) from exc
    try:
        payload = resp.json()
    except ValueError:
        payload = {"raw": resp.text}
    return resp.status_code, payload


class _RateLimiter:
    """Sliding-window requests-per-minute limiter, shared across workers."""

    def __init__(self, per_minute: int, clock, sleep):
        self._per_minute = per_minute
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._sent: collections.deque[float] = collections.deque()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._clock()
                while self._sent and now - self._sent[0] >= 60.0:
                    self._sent.popleft()
                if len(self._sent) < self._per_minute:
                    self._sent.append(now)
                    return
                wait = 60.0 - (now - self._sent[0])
            self._sleep(max(wait, 0.0))


class LlmClient:
    """Thread-safe client for caption, reasoning, and selection calls.

    *transport* is a callable (url, headers, body, timeout_s) ->
    (status_code, payload_dict); exceptions from it count as transport
    failures and are retried. When no transport is given the HTTP one is
    used and the credential env var must be set.
    """

    def __init__(self, config: EndpointConfig, transport=None, clock=time.monotonic, sleep=time.sleep):
        self.config = config
        self._transport = transport if transport is not None else http_transport
        self._requires_credential = transport is None
        self._clock = clock
        self._sleep = sleep
        self._semaphore = threading.BoundedSemaphore(config.max_concurrency)
        self._limiter = _RateLimiter(config.requests_per_minute, clock, sleep)

    def ask(self, prompt_text: str, max_tokens: int | None = None) -> LlmResponse:
        """One user message at temperature 0; the shape every pipeline call uses."""
        request = LlmRequest(
            model_id=self.config.model_id,
            messages=(("user", prompt_text),),
            temperature=0.0,
            max_tokens=max_tokens if max_tokens is not None else self.config.max_tokens,
        )
        return self.complete(request)

    def complete(self, request: LlmRequest) -> LlmResponse:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.config.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        elif self._requires_credential:
            raise Unauthorized(
                f"credential env var {self.config.api_key_env} is not set"
            )

        with self._semaphore:
            return self._attempt_loop(headers, request.body())

    def _attempt_loop(self, headers: dict, body: dict) -> LlmResponse:
        cfg = self.config
        last_status = None
        last_error = ""
        for attempt in range(1, cfg.max_attempts + 1):
            if attempt > 1:
                self._sleep(cfg.backoff_base_s * cfg.backoff_factor ** (attempt - 2))
            self._limiter.acquire()
            started = self._clock()
            try:
                status, payload = self._transport(
                    cfg.base_url, headers, body, cfg.timeout_s
                )
            except Exception as exc:
                last_status, last_error = None, str(exc)
                continue
            if status == 200:
                elapsed_ms = max(int(round((self._clock() - started) * 1000)), 0)
                return _parse_payload(payload, elapsed_ms)
            if status in (401, 403):
                raise Unauthorized(f"endpoint returned {status}")
            if status in _RETRYABLE_STATUS:
                last_status, last_error = status, f"status {status}"
                continue
            raise TransportFailure(f"unexpected status {status}")
        if last_status == 429:
            raise RateLimitedExhausted(
                f"gave up after {cfg.max_attempts} attempts ({last_error})"
            )
        raise TransportFailure(
            f"gave up after {cfg.max_attempts} attempts ({last_error})"
        )


def _parse_payload(payload: dict, latency_ms: int) -> LlmResponse:
    try:
        choice = payload["choices"][0]
        text = choice["message"]["content"]
        finish = choice.get("finish_reason", "stop")
    except (KeyError, IndexError, TypeError):
        raise MalformedResponse(f"unrecognized response shape: {payload!r:.200}")
    if not isinstance(text, str):
        raise MalformedResponse("message content is not a string")
    if finish not in FINISH_REASONS:
        finish = "error"
    if finish == "stop" and not text:
        raise MalformedResponse("finish_reason stop with empty text")
    usage = payload.get("usage") or {}
    return LlmResponse(
        text=text,
        finish_reason=finish,
        latency_ms=latency_ms,
        prompt_tokens=max(int(usage.get("prompt_tokens", 0) or 0), 0),
        completion_tokens=max(int(usage.get("completion_tokens", 0) or 0), 0),
    )


# Answer parsing. Rules are ordered and the first that fires wins; each rule
# only considers letters that address an actual option of this question.

_BARE_LETTER = re.compile(r"^\(?([A-Ja-j])[\)\.]{0,2}$")
_PAREN_LETTER = re.compile(r"\(([A-Ja-j])\)")
_ANSWER_IS = re.compile(r"answer\s+is\s*:?\s*\(?([A-Ja-j])\b", re.IGNORECASE)


def parse_answer(raw: str, options: tuple[str, ...] | list[str]) -> int:
    """Map a raw model response to an option index.

    Rule 1: the trimmed response is a single option letter, optionally in
    parentheses or with a trailing period. Rule 2: the response contains
    exactly one distinct letter via ``(X)`` or "answer is X". Rule 3: the
    response contains exactly one full option string, case-insensitively.
    Anything else raises AnswerUnparseable with the raw text attached.
    """
    if len(options) < 2:
        raise ValueError("need at least 2 options")
    n = len(options)

    def index_of(letter: str) -> int | None:
        idx = ord(letter.upper()) - ord("A")
        return idx if 0 <= idx < n else None

    match = _BARE_LETTER.match(raw.strip())
    if match:
        idx = index_of(match.group(1))
        if idx is not None:
            return idx

    letters = {
        m.group(1).upper()
        for m in _PAREN_LETTER.finditer(raw)
        if index_of(m.group(1)) is not None
    }
    letters |= {
        m.group(1).upper()
        for m in _ANSWER_IS.finditer(raw)
        if index_of(m.group(1)) is not None
    }
    if len(letters) == 1:
        return index_of(letters.pop())

    lowered = raw.lower()
    hits = [i for i, opt in enumerate(options) if opt.lower() in lowered]
    if len(hits) == 1:
        return hits[0]
    if len(letters) > 1:
        raise AnswerUnparseable(raw, "multiple distinct letters")
    if len(hits) > 1:
        raise AnswerUnparseable(raw, "multiple option texts present")
    raise AnswerUnparseable(raw, "no rule matched")


_SELECTION_SPLIT = re.compile(r"[,\n]")


def parse_agent_selection(raw: str, inventory: set[str] | frozenset[str]) -> set[str]:
    """Parse a comma-separated layer list, keeping only known layer names.

    Unknown names are dropped; an empty surviving set means the model did not
    produce a usable selection and the caller should fall back to routing.
    """
    if not inventory:
        raise ValueError("inventory must be nonempty")
    canonical = {layer.lower(): layer for layer in inventory}
    selected = set()
    for token in _SELECTION_SPLIT.split(raw):
        name = token.strip().strip(".").strip().lower().replace(" ", "_").replace("-", "_")
        if name in canonical:
            selected.add(canonical[name])
    if not selected:
        raise SelectionUnparseable(raw)
    return selected
