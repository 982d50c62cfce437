"""Monophonic note tracking via autocorrelation-based pitch detection.

Frame-wise fundamental from the cumulative-mean-normalized difference
function; voiced frames quantize to MIDI pitch, and runs of stable pitch
become note events.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import correlate

from symaudio.dsp.wav import SILENCE_FLOOR_DBFS, PcmClip, dbfs_to_amplitude
from symaudio.errors import BadFrameParams
from symaudio.model import NoteEvent

APERIODICITY_THRESHOLD = 0.15
MIN_NOTE_FRAMES = 5
FRAME_S = 0.025
HOP_S = 0.010
MIN_F0_HZ = 50.0
MAX_F0_HZ = 1200.0


def _frame_pitch(x: np.ndarray, window: int, tau_min: int, tau_max: int, sr: int,
                 threshold: float) -> int | None:
    """MIDI pitch of one analysis buffer, or None when unvoiced.

    *x* holds window + tau_max samples.
    """
    # d[tau] = sum_j (x[j] - x[j+tau])^2 expanded via correlation terms.
    sq = np.concatenate(([0.0], np.cumsum(x * x)))
    energy = sq[window]
    lag_energy = sq[np.arange(tau_max + 1) + window] - sq[np.arange(tau_max + 1)]
    corr = correlate(x, x[:window], mode="valid")[: tau_max + 1]
    d = energy + lag_energy - 2.0 * corr

    # Cumulative-mean normalization; d'[0] = 1 by definition.
    cum = np.cumsum(d[1:])
    with np.errstate(divide="ignore", invalid="ignore"):
        dprime = np.ones_like(d)
        taus = np.arange(1, tau_max + 1)
        dprime[1:] = np.where(cum > 0, d[1:] * taus / cum, 1.0)

    tau = None
    for candidate in range(tau_min, tau_max + 1):
        if dprime[candidate] < threshold:
            tau = candidate
            while tau + 1 <= tau_max and dprime[tau + 1] < dprime[tau]:
                tau += 1
            break
    if tau is None:
        return None

    # Parabolic refinement around the minimum.
    refined = float(tau)
    if 1 <= tau < tau_max:
        a, b, c = dprime[tau - 1], dprime[tau], dprime[tau + 1]
        denom = a - 2.0 * b + c
        if denom > 0:
            refined += 0.5 * (a - c) / denom
    f0 = sr / refined
    pitch = int(round(69 + 12 * np.log2(f0 / 440.0)))
    return pitch if 0 <= pitch <= 127 else None


def track_notes(
    clip: PcmClip,
    threshold: float = APERIODICITY_THRESHOLD,
    min_note_frames: int = MIN_NOTE_FRAMES,
    silence_floor_dbfs: float = SILENCE_FLOOR_DBFS,
) -> list[NoteEvent]:
    """Monophonic note events from 25 ms frames on a 10 ms hop.

    Unvoiced frames (aperiodicity above *threshold*, or below the silence
    floor) break pitch runs; only runs of at least *min_note_frames* frames
    with one stable pitch are emitted. Instrument is always "unknown".

    Raises:
        BadFrameParams: sample rate below 8000 Hz.
    """
    sr = clip.sample_rate_hz
    if sr < 8000:
        raise BadFrameParams(f"track_notes requires sample_rate_hz >= 8000, got {sr}")

    window = int(round(FRAME_S * sr))
    hop = int(round(HOP_S * sr))
    tau_max = int(sr / MIN_F0_HZ)
    tau_min = max(2, int(sr / MAX_F0_HZ))
    samples = clip.samples
    span = window + tau_max
    n_frames = (samples.size - span) // hop + 1 if samples.size >= span else 0
    silence_amp = dbfs_to_amplitude(silence_floor_dbfs)

    pitches: list[int | None] = []
    for i in range(n_frames):
        x = samples[i * hop : i * hop + span]
        if np.sqrt(np.mean(x[:window] ** 2)) < silence_amp:
            pitches.append(None)
            continue
        pitches.append(_frame_pitch(x, window, tau_min, tau_max, sr, threshold))

    notes: list[NoteEvent] = []
    run_start = 0
    for i in range(1, n_frames + 1):
        if i == n_frames or pitches[i] != pitches[run_start]:
            pitch = pitches[run_start]
            if pitch is not None and i - run_start >= min_note_frames:
                onset = run_start * hop / sr
                offset = min(((i - 1) * hop + window) / sr, clip.duration_s)
                notes.append(NoteEvent(midi_pitch=pitch, onset_s=onset, offset_s=offset))
            run_start = i
    return notes
