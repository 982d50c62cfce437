"""Note sidecar: symbolic note events from a music transcription model.

The MT3 transcription stack is research code without a packaged release, so
real mode reports what is missing rather than shipping dead glue. Stub mode
emits one or two fixed piano notes sized to the clip so CI can exercise the
protocol.
"""

from __future__ import annotations

from symaudio_sidecars.common import (
    Clip,
    ModelUnavailable,
    SidecarManifest,
    run_sidecar,
)

MANIFEST = SidecarManifest(
    name="sidecar-notes",
    layer="notes",
    model="magenta/mt3",
    version="0.1.0",
)


def stub_features(clip: Clip) -> list[dict]:
    """Deterministic fake notes: C4 at the start, G4 after it on longer clips.

    Clips shorter than 100 ms stay empty so onsets are always strictly
    before offsets after millisecond rounding.
    """
    duration = clip.duration_s
    if duration < 0.1:
        return []
    notes = [
        {
            "midi_pitch": 60,
            "onset_s": 0.0,
            "offset_s": min(0.5, duration),
            "instrument": "piano",
            "velocity": 64,
        }
    ]
    if duration >= 1.0:
        notes.append(
            {
                "midi_pitch": 67,
                "onset_s": 0.5,
                "offset_s": 1.0,
                "instrument": "piano",
                "velocity": 64,
            }
        )
    return notes


def real_features(clip: Clip) -> list[dict]:
    try:
        import mt3  # noqa: F401
    except ImportError as exc:
        raise ModelUnavailable(
            "mt3 is not importable; install the transcription stack from its "
            "repository or use --stub for fake output"
        ) from exc
    raise ModelUnavailable(
        "music transcription needs a local MT3 checkpoint, which this build does "
        "not bundle; use --stub"
    )


def main(argv: list[str] | None = None) -> int:
    return run_sidecar(MANIFEST, stub_features, real_features, argv)


if __name__ == "__main__":
    raise SystemExit(main())
