"""Discretization of valence-arousal-dominance values into categorical labels.

Kept dependency-free so both the domain model (label invariant checks) and
the extractor layer can use it without import cycles.
"""

from symaudio.errors import OutOfRange

EMOTION_VOCABULARY = ("neutral", "excited", "content", "angry", "sad")

# Half-width of the neutral square around (valence, arousal) = (0.5, 0.5).
NEUTRAL_BAND = 0.1


def discretize_emotion(valence: float, arousal: float, dominance: float) -> str:
    """Map continuous VAD values in [0,1] to one of five labels.

    Inside the neutral band around the center the label is "neutral";
    otherwise the (valence, arousal) quadrant decides. Dominance is accepted
    and recorded by callers but never affects the label. Values >= 0.5 count
    as the high side of an axis.

    Raises:
        OutOfRange: if any input is outside [0, 1].
    """
    for name, value in (("valence", valence), ("arousal", arousal), ("dominance", dominance)):
        if not 0.0 <= value <= 1.0:
            raise OutOfRange(f"{name} must be in [0, 1], got {value}")
    if max(abs(valence - 0.5), abs(arousal - 0.5)) <= NEUTRAL_BAND:
        return "neutral"
    if valence >= 0.5:
        return "excited" if arousal >= 0.5 else "content"
    return "angry" if arousal >= 0.5 else "sad"
