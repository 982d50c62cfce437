"""Transcript sidecar: speech recognition into time-aligned segments.

Real mode wraps Whisper with its default decoding settings (no language hint,
"base" checkpoint) and emits one segment per recognized span, clipped to the
clip duration. Stub mode emits fixed text so CI can exercise the protocol
without model weights.
"""

from __future__ import annotations

from symaudio_sidecars.common import (
    Clip,
    ModelUnavailable,
    SidecarManifest,
    clamp_span,
    run_sidecar,
)

MANIFEST = SidecarManifest(
    name="sidecar-transcript",
    layer="transcript",
    model="openai/whisper-base",
    version="0.1.0",
)


def stub_features(clip: Clip) -> list[dict]:
    """Deterministic fake transcript: one segment, two if the clip is long."""
    duration = clip.duration_s
    start, end = clamp_span(0.0, 1.5, duration)
    segments = [
        {"text": "the quick brown fox", "start_s": start, "end_s": end, "speaker": "spk0"}
    ]
    if duration > 2.0:
        start, end = clamp_span(2.0, 3.5, duration)
        segments.append(
            {"text": "jumps over the lazy dog", "start_s": start, "end_s": end, "speaker": "spk1"}
        )
    return segments


def real_features(clip: Clip) -> list[dict]:
    try:
        import whisper
    except ImportError as exc:
        raise ModelUnavailable(
            "whisper is not installed (pip install openai-whisper); use --stub for fake output"
        ) from exc
    model = whisper.load_model("base")
    result = model.transcribe(str(clip.path))
    segments = []
    for seg in result["segments"]:
        text = seg["text"].strip()
        if not text:
            continue
        start, end = clamp_span(float(seg["start"]), float(seg["end"]), clip.duration_s)
        segments.append({"text": text, "start_s": start, "end_s": end, "speaker": None})
    return segments


def main(argv: list[str] | None = None) -> int:
    return run_sidecar(MANIFEST, stub_features, real_features, argv)


if __name__ == "__main__":
    raise SystemExit(main())
