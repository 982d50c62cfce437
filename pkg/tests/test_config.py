"""Run configuration loading."""

from __future__ import annotations

import textwrap

import pytest

from symaudio.config import RunConfig, load_run_config
from symaudio.errors import ParseError


def _load(tmp_path, text):
    path = tmp_path / "run.yaml"
    path.write_text(textwrap.dedent(text))
    return load_run_config(path)


def test_defaults_without_file():
    config = load_run_config(None)
    assert config.prompt_style == "flat"
    assert config.workers == 4
    assert config.cache_dir is None
    assert config.output_dir == "runs"
    assert config.endpoint.api_key_env == "SARLM_API_KEY"
    layers = [d.layer for d in config.extractors]
    assert layers == ["events", "notes", "chords"]
    assert all(d.kind == "native" for d in config.extractors)
    config.registry()  # default extractor set is registrable


def test_empty_file_equals_defaults(tmp_path):
    assert _load(tmp_path, "") == RunConfig()


def test_full_config_parsed(tmp_path):
    config = _load(
        tmp_path,
        """\
        endpoint:
          base_url: http://model-host:9000/v1/chat/completions
          model_id: big-model
          api_key_env: MY_KEY
          max_concurrency: 2
          requests_per_minute: 30
        prompt_style: caption+agent
        routing:
          music_labels: [Music, Singing]
          music_threshold: 0.7
        extractors:
          - name: native-events
            layer: events
            kind: native
          - name: asr
            layer: transcript
            kind: sidecar
            invocation: sidecar-transcript --stub
            version: "2"
        cache_dir: /tmp/features
        output_dir: out
        workers: 8
        """,
    )
    assert config.endpoint.base_url == "http://model-host:9000/v1/chat/completions"
    assert config.endpoint.model_id == "big-model"
    assert config.endpoint.api_key_env == "MY_KEY"
    assert config.endpoint.max_concurrency == 2
    assert config.prompt_style == "caption+agent"
    assert config.routing.music_labels == frozenset({"Music", "Singing"})
    assert config.routing.music_threshold == 0.7
    assert config.routing.speech_labels == frozenset({"Speech"})  # default kept
    assert [d.name for d in config.extractors] == ["native-events", "asr"]
    assert config.extractors[1].invocation == "sidecar-transcript --stub"
    assert config.extractors[1].version == "2"
    assert config.cache_dir == "/tmp/features"
    assert config.workers == 8
    config.registry()


def test_unknown_keys_rejected_at_every_level(tmp_path):
    with pytest.raises(ParseError, match="unknown config keys"):
        _load(tmp_path, "surprise: 1\n")
    with pytest.raises(ParseError, match="unknown endpoint keys"):
        _load(tmp_path, "endpoint:\n  api_key: inline-secret\n")
    with pytest.raises(ParseError, match="unknown routing keys"):
        _load(tmp_path, "routing:\n  video_labels: [x]\n")
    with pytest.raises(ParseError, match=r"unknown extractors\[0\] keys"):
        _load(
            tmp_path,
            """\
            extractors:
              - name: a
                layer: events
                kind: native
                gpu: true
            """,
        )


def test_invalid_values_become_parse_errors(tmp_path):
    with pytest.raises(ParseError, match="prompt_style"):
        _load(tmp_path, "prompt_style: verbose\n")
    with pytest.raises(ParseError):
        _load(tmp_path, "routing:\n  music_threshold: 2.0\n")
    with pytest.raises(ParseError):
        _load(tmp_path, "extractors:\n  - name: x\n    layer: events\n")
    with pytest.raises(ParseError):
        _load(tmp_path, "extractors:\n  - [not, a, mapping]\n")


def test_bad_files(tmp_path):
    with pytest.raises(ParseError):
        load_run_config(tmp_path / "absent.yaml")
    with pytest.raises(ParseError, match="must be a mapping"):
        _load(tmp_path, "- just\n- a\n- list\n")
    with pytest.raises(ParseError, match="invalid YAML"):
        _load(tmp_path, "endpoint: [unclosed\n")


def test_registry_conflicts_fail_at_load_time(tmp_path):
    with pytest.raises(ParseError, match="two extractors"):
        _load(
            tmp_path,
            """\
            extractors:
              - name: a
                layer: events
                kind: native
              - name: b
                layer: events
                kind: native
            """,
        )
