"""Energy-based activity segmentation over short-time RMS frames."""

from __future__ import annotations

import numpy as np

from symaudio.dsp.wav import SILENCE_FLOOR_DBFS, PcmClip, dbfs_to_amplitude, frame_rms
from symaudio.model import EventTag

FRAME_S = 0.05
MERGE_GAP_S = 0.2


def detect_activity(
    clip: PcmClip,
    active_floor_dbfs: float = SILENCE_FLOOR_DBFS,
    merge_gap_s: float = MERGE_GAP_S,
) -> list[EventTag]:
    """Segments where short-time RMS exceeds the activity floor.

    Active runs separated by gaps of at most *merge_gap_s* merge into one
    segment; confidence is the mean full-scale-normalized RMS over the run's
    frames.
    """
    sr = clip.sample_rate_hz
    frame_len = max(1, int(round(FRAME_S * sr)))
    rms = frame_rms(clip.samples, frame_len, frame_len)
    active = rms > dbfs_to_amplitude(active_floor_dbfs)
    if not active.any():
        return []

    max_gap_frames = int(merge_gap_s / FRAME_S)
    active_idx = np.flatnonzero(active)
    runs: list[tuple[int, int]] = []  # inclusive frame spans
    start = prev = int(active_idx[0])
    for idx in active_idx[1:]:
        if idx - prev - 1 <= max_gap_frames:
            prev = int(idx)
        else:
            runs.append((start, prev))
            start = prev = int(idx)
    runs.append((start, prev))

    events = []
    for first, last in runs:
        confidence = float(min(1.0, rms[first : last + 1].mean()))
        events.append(
            EventTag(
                label="activity",
                start_s=first * FRAME_S,
                end_s=min((last + 1) * FRAME_S, clip.duration_s),
                confidence=confidence,
            )
        )
    return events
