"""VAD discretization rule."""

from __future__ import annotations

import pytest

from symaudio.emotion import EMOTION_VOCABULARY, NEUTRAL_BAND, discretize_emotion
from symaudio.errors import OutOfRange


def test_vocabulary():
    assert EMOTION_VOCABULARY == ("neutral", "excited", "content", "angry", "sad")


def test_quadrants():
    assert discretize_emotion(0.9, 0.9, 0.5) == "excited"
    assert discretize_emotion(0.9, 0.1, 0.5) == "content"
    assert discretize_emotion(0.1, 0.9, 0.5) == "angry"
    assert discretize_emotion(0.1, 0.1, 0.5) == "sad"


def test_neutral_band_is_inclusive():
    assert discretize_emotion(0.5, 0.5, 0.5) == "neutral"
    edge = 0.5 + NEUTRAL_BAND
    assert discretize_emotion(edge, edge, 0.0) == "neutral"
    assert discretize_emotion(0.5 - NEUTRAL_BAND, 0.5, 1.0) == "neutral"
    # One step past the band leaves neutral.
    assert discretize_emotion(edge + 0.001, 0.5, 0.5) == "excited"
    assert discretize_emotion(0.3, edge + 0.001, 0.5) == "angry"


def test_half_point_counts_as_high_side():
    # Outside the band, valence or arousal exactly 0.5 takes the high branch.
    assert discretize_emotion(0.5, 0.9, 0.5) == "excited"
    assert discretize_emotion(0.9, 0.5, 0.5) == "excited"
    assert discretize_emotion(0.2, 0.5, 0.5) == "angry"
    assert discretize_emotion(0.5, 0.2, 0.5) == "content"


def test_dominance_never_affects_the_label():
    for dominance in (0.0, 0.25, 0.5, 0.75, 1.0):
        assert discretize_emotion(0.9, 0.9, dominance) == "excited"
        assert discretize_emotion(0.1, 0.1, dominance) == "sad"


def test_grid_stays_in_vocabulary_and_matches_quadrant_rule():
    steps = [i / 20 for i in range(21)]
    for v in steps:
        for a in steps:
            label = discretize_emotion(v, a, 0.5)
            assert label in EMOTION_VOCABULARY
            if max(abs(v - 0.5), abs(a - 0.5)) <= NEUTRAL_BAND:
                assert label == "neutral"
            elif v >= 0.5:
                assert label == ("excited" if a >= 0.5 else "content")
            else:
                assert label == ("angry" if a >= 0.5 else "sad")


def test_out_of_range_inputs_rejected():
    with pytest.raises(OutOfRange):
        discretize_emotion(-0.01, 0.5, 0.5)
    with pytest.raises(OutOfRange):
        discretize_emotion(0.5, 1.01, 0.5)
    with pytest.raises(OutOfRange):
        discretize_emotion(0.5, 0.5, 2.0)
