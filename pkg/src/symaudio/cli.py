"""Command-line entry point.

Machine-readable output (feature JSON, prompts, scores) goes to standard
output; progress and diagnostics go to standard error, so every subcommand
composes in a pipeline. Exit codes: 0 success, 1 usage error, 2 runtime
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from symaudio.bench import (
    FORMATS,
    analyze_errors,
    load_benchmark,
    load_results,
    render_markdown,
    run_eval,
    score,
)
from symaudio.config import RunConfig, load_run_config
from symaudio.errors import SymaudioError
from symaudio.goldens import write_prompt_goldens
from symaudio.llm import LlmClient, parse_answer
from symaudio.prompts import (
    Question,
    build_agent_selection_prompt,
    build_caption_prompt,
    build_caption_reasoning_prompt,
    build_flat_prompt,
    option_letter,
)
from symaudio.registry import extract_all, ingest_precomputed, route_features
from symaudio.serialize import serialize_bundle
from symaudio.testing import (
    FixedTransport,
    GibberishTransport,
    GoldOracleTransport,
    ScriptedTransport,
)

DEFAULT_FIXTURES_DIR = "fixtures/prompts"


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this tool reserves 2 for runtime."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _load_question_file(path: str) -> tuple[Question, int | None]:
    payload = json.loads(Path(path).read_text())
    question = Question(
        text=str(payload["text"]),
        options=tuple(str(o) for o in payload["options"]),
        category=str(payload.get("category", "sound")),
    )
    gold = payload.get("gold_index")
    if gold is None and "answer" in payload:
        hits = [i for i, o in enumerate(question.options) if o == payload["answer"]]
        gold = hits[0] if len(hits) == 1 else None
    return question, gold


def _make_transport(mock_path: str, gold_by_question: dict[str, str] | None):
    spec = json.loads(Path(mock_path).read_text())
    mode = spec.get("mode", "fixed")
    if mode == "fixed":
        return FixedTransport(str(spec.get("text", "(A)")))
    if mode == "gibberish":
        return GibberishTransport()
    if mode == "sequence":
        return ScriptedTransport([str(t) for t in spec.get("responses", [])])
    if mode == "gold":
        if gold_by_question is None:
            raise SymaudioError("mock mode 'gold' needs gold answers in the input")
        return GoldOracleTransport(gold_by_question)
    raise SymaudioError(f"unknown mock mode {mode!r}")


def _make_client(config: RunConfig, mock_path: str | None, gold_by_question=None) -> LlmClient:
    transport = None
    if mock_path is not None:
        transport = _make_transport(mock_path, gold_by_question)
    return LlmClient(config.endpoint, transport=transport)


def _resolve_ref(ref: str, base: Path) -> str:
    path = Path(ref)
    if path.is_absolute() or path.exists():
        return str(path)
    return str(base / path)


def _bundle_provider(config: RunConfig, base: Path):
    registry = config.registry()

    def provider(sample):
        ref = _resolve_ref(sample.clip_ref, base)
        if ref.endswith(".json"):
            return ingest_precomputed(ref)
        return extract_all(
            ref, registry, cache_dir=config.cache_dir, clip_id=sample.sample_id
        )

    return provider


def _cmd_extract(args) -> int:
    config = load_run_config(args.config)
    registry = config.registry()
    cache_dir = args.cache_dir or config.cache_dir
    target = Path(args.path)
    wavs = sorted(target.glob("*.wav")) if target.is_dir() else [target]
    if not wavs:
        _log(f"no .wav files under {target}")
        return 2
    for wav in wavs:
        bundle = extract_all(wav, registry, cache_dir=cache_dir)
        print(serialize_bundle(bundle))
    return 0


def _cmd_prompt(args) -> int:
    if args.regen_goldens:
        for path in write_prompt_goldens(args.fixtures_dir):
            print(path)
        return 0
    if not args.features or not args.question:
        _log("prompt: features and question files are required")
        return 1
    bundle = ingest_precomputed(args.features)
    question, _ = _load_question_file(args.question)
    if args.style == "flat":
        prompt = build_flat_prompt(bundle, question)
    elif args.style == "caption1":
        prompt = build_caption_prompt(bundle)
    elif args.style == "agent":
        prompt = build_agent_selection_prompt(question, bundle)
    else:
        if not args.caption_file:
            _log("prompt: --caption-file is required for style caption2")
            return 1
        caption = Path(args.caption_file).read_text()
        prompt = build_caption_reasoning_prompt(caption, question)
    sys.stdout.write(prompt.text)
    return 0


def _cmd_caption(args) -> int:
    config = load_run_config(args.config)
    client = _make_client(config, args.mock_llm)
    bundle = ingest_precomputed(args.features)
    routed = route_features(bundle, config.routing)
    prompt = build_caption_prompt(routed)
    print(client.ask(prompt.text).text)
    return 0


def _cmd_reason(args) -> int:
    from symaudio.agent import select_features
    from symaudio.errors import AnswerUnparseable

    config = load_run_config(args.config)
    question, gold = _load_question_file(args.question)
    gold_map = None
    if gold is not None:
        gold_map = {question.text: option_letter(gold)}
    client = _make_client(config, args.mock_llm, gold_map)
    bundle = ingest_precomputed(args.features)
    routed = route_features(bundle, config.routing)
    if config.prompt_style.endswith("+agent"):
        routed, _ = select_features(question, routed, client, config.routing)
    if config.prompt_style.startswith("caption"):
        caption = client.ask(build_caption_prompt(routed).text).text
        prompt = build_caption_reasoning_prompt(caption, question)
        included = sorted(routed.nonempty_layers())
    else:
        flat = build_flat_prompt(routed, question)
        prompt, included = flat, sorted(flat.included_layers)
    raw = client.ask(prompt.text).text
    try:
        predicted = parse_answer(raw, question.options)
        parse_error = False
    except AnswerUnparseable:
        predicted, parse_error = None, True
    out = {
        "predicted_index": predicted,
        "letter": option_letter(predicted) if predicted is not None else None,
        "parse_error": parse_error,
        "raw_output": raw,
        "included_layers": included,
    }
    if gold is not None:
        out["correct"] = predicted == gold
    print(json.dumps(out, sort_keys=True))
    return 0


def _gold_map(samples) -> dict[str, str]:
    return {s.question.text: option_letter(s.gold_index) for s in samples}


def _cmd_eval(args) -> int:
    config = load_run_config(args.config)
    samples = load_benchmark(args.benchmark, args.format)
    client = _make_client(config, args.mock_llm, _gold_map(samples))
    out_dir = Path(args.out_dir or config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results_path = out_dir / "results.jsonl"
    provider = _bundle_provider(config, Path(args.benchmark).parent)
    results = run_eval(
        samples,
        client,
        provider,
        style=config.prompt_style,
        routing=config.routing,
        workers=config.workers,
        results_path=results_path,
    )
    report = score(results, samples)
    (out_dir / "score.json").write_text(json.dumps(report.to_dict(), sort_keys=True) + "\n")
    (out_dir / "report.md").write_text(render_markdown(report))
    _log(f"evaluated {len(results)} samples; results in {results_path}")
    print(json.dumps(report.to_dict(), sort_keys=True))
    return 0


def _cmd_score(args) -> int:
    samples = load_benchmark(args.benchmark, args.format)
    results = load_results(args.results)
    report = score(results, samples)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "score.json").write_text(json.dumps(report.to_dict(), sort_keys=True) + "\n")
        (out_dir / "report.md").write_text(render_markdown(report))
    print(json.dumps(report.to_dict(), sort_keys=True))
    return 0


def _cmd_analyze(args) -> int:
    config = load_run_config(args.config)
    samples = load_benchmark(args.benchmark, args.format)
    results = load_results(args.results)
    base = Path(args.benchmark).parent
    bundles = {}
    for sample in samples:
        candidates = []
        if args.bundles_dir:
            candidates.append(Path(args.bundles_dir) / f"{sample.sample_id}.features.json")
        if sample.clip_ref.endswith(".json"):
            candidates.append(Path(_resolve_ref(sample.clip_ref, base)))
        if config.cache_dir:
            candidates.append(Path(config.cache_dir) / f"{sample.sample_id}.features.json")
        for candidate in candidates:
            if candidate.exists():
                bundles[sample.sample_id] = ingest_precomputed(candidate)
                break
    report = analyze_errors(results, bundles, samples)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "errors.json").write_text(json.dumps(report.to_dict(), sort_keys=True) + "\n")
    print(json.dumps(report.to_dict(), sort_keys=True))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="symaudio", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("extract", help="extract features from a WAV file or directory")
    p.add_argument("path", help="WAV file or directory of WAV files")
    p.add_argument("--config", default=None)
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("prompt", help="render a prompt from feature JSON")
    p.add_argument("features", nargs="?", default=None, help="canonical feature JSON file")
    p.add_argument("question", nargs="?", default=None, help="question JSON file")
    p.add_argument("--style", choices=("flat", "caption1", "caption2", "agent"), default="flat")
    p.add_argument("--caption-file", default=None, help="caption text for style caption2")
    p.add_argument("--config", default=None)
    p.add_argument("--regen-goldens", action="store_true", help="rewrite the prompt golden files")
    p.add_argument("--fixtures-dir", default=DEFAULT_FIXTURES_DIR)
    p.set_defaults(func=_cmd_prompt)

    p = sub.add_parser("caption", help="stage-1 caption call for one clip")
    p.add_argument("features")
    p.add_argument("--config", default=None)
    p.add_argument("--mock-llm", default=None, help="JSON file describing a scripted responder")
    p.set_defaults(func=_cmd_caption)

    p = sub.add_parser("reason", help="answer one question over one clip")
    p.add_argument("features")
    p.add_argument("question")
    p.add_argument("--config", default=None)
    p.add_argument("--mock-llm", default=None)
    p.set_defaults(func=_cmd_reason)

    p = sub.add_parser("eval", help="run a benchmark file end to end")
    p.add_argument("benchmark")
    p.add_argument("--format", choices=FORMATS, required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--mock-llm", default=None)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("score", help="score a results file against its benchmark")
    p.add_argument("results")
    p.add_argument("benchmark")
    p.add_argument("--format", choices=FORMATS, required=True)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("analyze", help="attribute errors in a results file")
    p.add_argument("results")
    p.add_argument("benchmark")
    p.add_argument("--format", choices=FORMATS, required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--bundles-dir", default=None)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=_cmd_analyze)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except (SymaudioError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
