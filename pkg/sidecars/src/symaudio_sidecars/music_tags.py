"""Music tag sidecar: clip-level genre and timbre tags from a music tagger.

The musicnn tagger predates current TensorFlow releases, so real mode reports
the missing stack instead of shipping glue that cannot run. Stub mode emits
two fixed tags.
"""

from __future__ import annotations

from symaudio_sidecars.common import (
    Clip,
    ModelUnavailable,
    SidecarManifest,
    run_sidecar,
)

MANIFEST = SidecarManifest(
    name="sidecar-music-tags",
    layer="music_tags",
    model="musicnn/msd",
    version="0.1.0",
)


def stub_features(clip: Clip) -> list[dict]:
    """Deterministic fake tags; tags carry no timestamps, so no clipping."""
    return [
        {"label": "electronic", "confidence": 0.8},
        {"label": "ambient", "confidence": 0.5},
    ]


def real_features(clip: Clip) -> list[dict]:
    try:
        import musicnn  # noqa: F401
    except ImportError as exc:
        raise ModelUnavailable(
            "musicnn is not installed (pip install musicnn); use --stub for fake output"
        ) from exc
    raise ModelUnavailable(
        "music tagging needs a musicnn build compatible with the installed "
        "TensorFlow, which this build does not bundle; use --stub"
    )


def main(argv: list[str] | None = None) -> int:
    return run_sidecar(MANIFEST, stub_features, real_features, argv)


if __name__ == "__main__":
    raise SystemExit(main())
