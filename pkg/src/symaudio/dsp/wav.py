"""WAV I/O: PCM 16-bit and 32-bit float, mono; stereo downmixed by averaging."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from symaudio.errors import ClipUnreadable

# Frames quieter than this count as silence across the native extractors.
SILENCE_FLOOR_DBFS = -40.0


def dbfs_to_amplitude(dbfs: float) -> float:
    return 10.0 ** (dbfs / 20.0)


@dataclass(frozen=True, eq=False)
class PcmClip:
    """Mono PCM samples in [-1, 1]."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("clip must be a nonempty 1-D sample array")
        if np.max(np.abs(samples)) > 1.0 + 1e-9:
            raise ValueError("samples must lie in [-1, 1]")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        object.__setattr__(self, "samples", samples)

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz


def read_wav(path: str | Path) -> PcmClip:
    """Read a WAV file into a normalized mono clip.

    Supports PCM 16-bit and 32-bit float payloads only; stereo is downmixed
    by channel averaging.

    Raises:
        ClipUnreadable: missing file, undecodable payload, or unsupported format.
    """
    path = Path(path)
    try:
        rate, data = wavfile.read(str(path))
    except FileNotFoundError as exc:
        raise ClipUnreadable(f"no such file: {path}") from exc
    except Exception as exc:
        raise ClipUnreadable(f"cannot decode {path}: {exc}") from exc

    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype in (np.float32, np.float64):
        samples = np.clip(data.astype(np.float64), -1.0, 1.0)
    else:
        raise ClipUnreadable(
            f"{path}: unsupported sample format {data.dtype}; "
            "only PCM 16-bit and 32-bit float are accepted"
        )

    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    if samples.size == 0:
        raise ClipUnreadable(f"{path}: empty audio stream")
    return PcmClip(samples=samples, sample_rate_hz=int(rate))


def write_wav(path: str | Path, clip: PcmClip, float32: bool = False) -> None:
    """Write a clip back to disk (PCM 16-bit by default)."""
    if float32:
        wavfile.write(str(path), clip.sample_rate_hz, clip.samples.astype(np.float32))
    else:
        scaled = np.clip(clip.samples, -1.0, 1.0) * 32767.0
        wavfile.write(str(path), clip.sample_rate_hz, scaled.astype(np.int16))


def frame_rms(samples: np.ndarray, frame_len: int, hop: int) -> np.ndarray:
    """RMS of frames starting at multiples of *hop*; the tail frame may be short."""
    n = samples.size
    count = max(1, -(-n // hop))  # ceil
    out = np.empty(count)
    for i in range(count):
        frame = samples[i * hop : i * hop + frame_len]
        out[i] = np.sqrt(np.mean(frame**2)) if frame.size else 0.0
    return out
