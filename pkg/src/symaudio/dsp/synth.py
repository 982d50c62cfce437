"""Deterministic test-signal synthesis: tones, triads, noise.

Used by the oracle test suites and the demo scripts; not part of the
extraction pipeline itself.
"""

from __future__ import annotations

import numpy as np

from symaudio.dsp.wav import PcmClip

TRIAD_INTERVALS = {"maj": (0, 4, 7), "min": (0, 3, 7)}


def midi_to_hz(midi_pitch: float) -> float:
    return 440.0 * 2.0 ** ((midi_pitch - 69) / 12.0)


def tone(freq_hz: float, duration_s: float, sample_rate_hz: int, amplitude: float = 0.5) -> np.ndarray:
    t = np.arange(int(round(duration_s * sample_rate_hz))) / sample_rate_hz
    return amplitude * np.sin(2.0 * np.pi * freq_hz * t)


def triad(
    root_pitch_class: int,
    quality: str,
    duration_s: float,
    sample_rate_hz: int,
    octave: int = 4,
    amplitude: float = 0.25,
) -> np.ndarray:
    """Equal-amplitude, equal-tempered triad; root at the given octave."""
    root_midi = 12 * (octave + 1) + root_pitch_class
    out = np.zeros(int(round(duration_s * sample_rate_hz)))
    for interval in TRIAD_INTERVALS[quality]:
        out += tone(midi_to_hz(root_midi + interval), duration_s, sample_rate_hz, amplitude)
    return out


def white_noise(duration_s: float, sample_rate_hz: int, seed: int = 0, amplitude: float = 0.9) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return amplitude * rng.uniform(-1.0, 1.0, int(round(duration_s * sample_rate_hz)))


def silence(duration_s: float, sample_rate_hz: int) -> np.ndarray:
    return np.zeros(int(round(duration_s * sample_rate_hz)))


def as_clip(samples: np.ndarray, sample_rate_hz: int) -> PcmClip:
    return PcmClip(samples=np.clip(samples, -1.0, 1.0), sample_rate_hz=sample_rate_hz)
