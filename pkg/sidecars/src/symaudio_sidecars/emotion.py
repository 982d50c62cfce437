"""Emotion sidecar: continuous valence/arousal/dominance for speech clips.

Real mode would wrap a wav2vec2-based dimensional emotion model; its ONNX
export is fetched out of band, so the adapter reports the missing weights.
Stub mode emits fixed VAD values with the label their discretization implies.
"""

from __future__ import annotations

from symaudio_sidecars.common import (
    Clip,
    ModelUnavailable,
    SidecarManifest,
    run_sidecar,
)

MANIFEST = SidecarManifest(
    name="sidecar-emotion",
    layer="emotion",
    model="audeering/w2v2-msp-dim",
    version="0.1.0",
)

# Half-width of the neutral square around (valence, arousal) = (0.5, 0.5).
NEUTRAL_BAND = 0.1


def discretize(valence: float, arousal: float) -> str:
    """Quadrant label for (valence, arousal); dominance never matters.

    The consumer owns this rule and re-derives the label when it validates
    incoming JSON, so this copy exists only to stamp a consistent label into
    the emitted document. Keep the two in lockstep.
    """
    if max(abs(valence - 0.5), abs(arousal - 0.5)) <= NEUTRAL_BAND:
        return "neutral"
    if valence >= 0.5:
        return "excited" if arousal >= 0.5 else "content"
    return "angry" if arousal >= 0.5 else "sad"


def stub_features(clip: Clip) -> dict:
    """Deterministic fake VAD: calm positive speech."""
    valence, arousal, dominance = 0.8, 0.3, 0.5
    return {
        "valence": valence,
        "arousal": arousal,
        "dominance": dominance,
        "label": discretize(valence, arousal),
    }


def real_features(clip: Clip) -> dict:
    try:
        import audonnx  # noqa: F401
    except ImportError as exc:
        raise ModelUnavailable(
            "audonnx is not installed (pip install audonnx); use --stub for fake output"
        ) from exc
    raise ModelUnavailable(
        "emotion prediction needs the exported VAD model weights, which this "
        "build does not bundle; use --stub"
    )


def main(argv: list[str] | None = None) -> int:
    return run_sidecar(MANIFEST, stub_features, real_features, argv)


if __name__ == "__main__":
    raise SystemExit(main())
