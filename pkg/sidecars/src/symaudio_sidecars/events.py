"""Event sidecar: timestamped sound tags from an audio tagging model.

Real mode requires the PANNs inference stack; turning its framewise scores
into event spans needs checkpoint plumbing this build does not ship, so the
adapter reports the missing stack instead of guessing. Stub mode checks the
clip against the silence floor and tags the whole span, which is enough to
exercise the protocol and the silence contract in CI.
"""

from __future__ import annotations

from symaudio_sidecars.common import (
    Clip,
    ModelUnavailable,
    SidecarManifest,
    run_sidecar,
)

MANIFEST = SidecarManifest(
    name="sidecar-events",
    layer="events",
    model="panns/cnn14",
    version="0.1.0",
)


def stub_features(clip: Clip) -> list[dict]:
    """Deterministic fake tags: silence stays empty, anything else is one span."""
    if clip.is_silent():
        return []
    return [
        {"label": "Sound", "start_s": 0.0, "end_s": clip.duration_s, "confidence": 0.9}
    ]


def real_features(clip: Clip) -> list[dict]:
    try:
        import panns_inference  # noqa: F401
    except ImportError as exc:
        raise ModelUnavailable(
            "panns_inference is not installed (pip install panns-inference); "
            "use --stub for fake output"
        ) from exc
    raise ModelUnavailable(
        "event tagging needs a local PANNs checkpoint, which this build does not "
        "bundle; use --stub"
    )


def main(argv: list[str] | None = None) -> int:
    return run_sidecar(MANIFEST, stub_features, real_features, argv)


if __name__ == "__main__":
    raise SystemExit(main())
