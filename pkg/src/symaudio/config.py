"""Run configuration: a single YAML file describing endpoint, style, routing,
extractors, and directories.

Credentials never appear in the file; the endpoint section names an
environment variable and the client reads the key from there at call time,
so configs are safe to commit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from symaudio.bench.runner import RUN_STYLES
from symaudio.errors import ParseError
from symaudio.llm import EndpointConfig
from symaudio.registry import ExtractorDescriptor, Registry, RoutingConfig

_TOP_KEYS = {
    "endpoint",
    "prompt_style",
    "routing",
    "extractors",
    "cache_dir",
    "output_dir",
    "workers",
}


def _default_extractors() -> tuple[ExtractorDescriptor, ...]:
    return (
        ExtractorDescriptor("native-events", "events", "native"),
        ExtractorDescriptor("native-notes", "notes", "native"),
        ExtractorDescriptor("native-chords", "chords", "native"),
    )


@dataclass(frozen=True)
class RunConfig:
    endpoint: EndpointConfig = field(default_factory=EndpointConfig)
    prompt_style: str = "flat"
    routing: RoutingConfig = field(default_factory=RoutingConfig)
    extractors: tuple[ExtractorDescriptor, ...] = field(default_factory=_default_extractors)
    cache_dir: str | None = None
    output_dir: str = "runs"
    workers: int = 4

    def registry(self) -> Registry:
        return Registry(self.extractors)


def _build_endpoint(section: dict) -> EndpointConfig:
    known = {
        "base_url",
        "model_id",
        "api_key_env",
        "max_concurrency",
        "requests_per_minute",
        "max_attempts",
        "backoff_base_s",
        "backoff_factor",
        "timeout_s",
        "max_tokens",
    }
    _reject_unknown(section, known, "endpoint")
    return EndpointConfig(**section)


def _build_routing(section: dict) -> RoutingConfig:
    known = {"music_labels", "speech_labels", "music_threshold", "speech_threshold"}
    _reject_unknown(section, known, "routing")
    kwargs = dict(section)
    for key in ("music_labels", "speech_labels"):
        if key in kwargs:
            kwargs[key] = frozenset(str(v) for v in kwargs[key])
    return RoutingConfig(**kwargs)


def _build_extractors(entries: list) -> tuple[ExtractorDescriptor, ...]:
    descriptors = []
    for index, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ParseError(f"extractors[{index}] must be a mapping")
        known = {"name", "layer", "kind", "invocation", "version"}
        _reject_unknown(entry, known, f"extractors[{index}]")
        try:
            descriptors.append(
                ExtractorDescriptor(
                    name=str(entry["name"]),
                    layer=str(entry["layer"]),
                    kind=str(entry["kind"]),
                    invocation=str(entry.get("invocation", "")),
                    version=str(entry.get("version", "1")),
                )
            )
        except KeyError as exc:
            raise ParseError(f"extractors[{index}]: missing field {exc}") from exc
    return tuple(descriptors)


def _reject_unknown(section: dict, known: set[str], where: str) -> None:
    unknown = set(section) - known
    if unknown:
        raise ParseError(f"unknown {where} keys: {sorted(unknown)}")


def load_run_config(path: str | Path | None = None) -> RunConfig:
    """Defaults when path is None; otherwise strict YAML parsing.

    Raises:
        ParseError: unreadable file, invalid YAML, unknown keys, or bad
        values (the underlying constructors' errors are re-raised as such).
    """
    if path is None:
        return RunConfig()
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: invalid YAML: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: config root must be a mapping")
    _reject_unknown(raw, _TOP_KEYS, "config")

    style = str(raw.get("prompt_style", "flat"))
    if style not in RUN_STYLES:
        raise ParseError(f"prompt_style must be one of {RUN_STYLES}, got {style!r}")

    try:
        endpoint = _build_endpoint(dict(raw.get("endpoint") or {}))
        routing = _build_routing(dict(raw.get("routing") or {}))
        extractors = (
            _build_extractors(list(raw["extractors"]))
            if raw.get("extractors")
            else _default_extractors()
        )
        config = RunConfig(
            endpoint=endpoint,
            prompt_style=style,
            routing=routing,
            extractors=extractors,
            cache_dir=str(raw["cache_dir"]) if raw.get("cache_dir") else None,
            output_dir=str(raw.get("output_dir", "runs")),
            workers=int(raw.get("workers", 4)),
        )
        config.registry()  # fail fast on inconsistent extractor entries
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return config
