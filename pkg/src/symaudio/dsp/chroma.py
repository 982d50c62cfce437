"""Pitch-class energy profiles from windowed FFT frames."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from symaudio.dsp.wav import SILENCE_FLOOR_DBFS, PcmClip, dbfs_to_amplitude
from symaudio.errors import BadFrameParams

# Bins outside this band carry mostly rumble / hiss and are ignored.
MIN_FREQ_HZ = 55.0
MAX_FREQ_HZ = 5000.0


@dataclass(frozen=True, eq=False)
class ChromaMatrix:
    """Per-frame 12-vectors; each row sums to 1 or is all-zero (silent frame)."""

    frames: np.ndarray  # shape (n_frames, 12)
    frame_hop_s: float

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def end_s(self) -> float:
        return self.n_frames * self.frame_hop_s


def compute_chroma(
    clip: PcmClip,
    frame_size: int = 4096,
    hop: int = 2048,
    silence_floor_dbfs: float = SILENCE_FLOOR_DBFS,
) -> ChromaMatrix:
    """Hann-windowed magnitude spectra folded onto the 12 pitch classes.

    Every sample is covered by some frame (the tail is zero-padded), so a
    clip of N samples yields ceil(N / hop) frames. Frames whose raw RMS falls
    below the silence floor come out all-zero; the rest are L1-normalized.

    Raises:
        BadFrameParams: frame_size not a power of two >= 1024, or hop invalid.
    """
    if frame_size < 1024 or frame_size & (frame_size - 1) != 0:
        raise BadFrameParams(f"frame_size must be a power of two >= 1024, got {frame_size}")
    if not 1 <= hop <= frame_size:
        raise BadFrameParams(f"hop must be in [1, frame_size], got {hop}")

    samples = clip.samples
    sr = clip.sample_rate_hz
    n_frames = max(1, -(-samples.size // hop))
    padded = np.zeros((n_frames - 1) * hop + frame_size)
    padded[: samples.size] = samples

    window = np.hanning(frame_size)
    freqs = np.fft.rfftfreq(frame_size, d=1.0 / sr)
    band = (freqs >= MIN_FREQ_HZ) & (freqs <= MAX_FREQ_HZ)
    pitch_class = np.zeros(freqs.size, dtype=int)
    pitch_class[band] = (
        np.round(12.0 * np.log2(freqs[band] / 440.0)).astype(int) + 69
    ) % 12

    silence_amp = dbfs_to_amplitude(silence_floor_dbfs)
    frames = np.zeros((n_frames, 12))
    for i in range(n_frames):
        frame = padded[i * hop : i * hop + frame_size]
        if np.sqrt(np.mean(frame**2)) < silence_amp:
            continue  # silent frame stays all-zero
        magnitude = np.abs(np.fft.rfft(frame * window))
        chroma = np.bincount(pitch_class[band], weights=magnitude[band], minlength=12)
        total = chroma.sum()
        if total > 0:
            frames[i] = chroma / total
    return ChromaMatrix(frames=frames, frame_hop_s=hop / sr)
