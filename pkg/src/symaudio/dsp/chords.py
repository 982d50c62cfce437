"""Template-matching chord estimation with Viterbi smoothing.

24 binary triad templates (root, third, fifth at 1/3 each) plus a no-chord
state driven by the silent-frame indicator. Output segments tile
[0, chroma end] with no gaps and no adjacent duplicates.
"""

from __future__ import annotations

import numpy as np

from symaudio.dsp.chroma import ChromaMatrix
from symaudio.model import CHORD_SYMBOLS, ChordSegment

# State order follows the shared vocabulary: C:maj, C:min, ... B:min, then "N".
CHORD_STATES = CHORD_SYMBOLS

N_STATE = len(CHORD_STATES) - 1

_LOG_FLOOR = 1e-12


def _triad_templates() -> np.ndarray:
    templates = np.zeros((24, 12))
    for root in range(12):
        for col, third in ((2 * root, 4), (2 * root + 1, 3)):
            for interval in (0, third, 7):
                templates[col, (root + interval) % 12] = 1.0 / 3.0
    return templates


TEMPLATES = _triad_templates()


def frame_scores(chroma: ChromaMatrix) -> np.ndarray:
    """Per-frame template scores, shape (n_frames, 25).

    Triad states score the template dot product; the "N" state scores 1/3 on
    silent (all-zero) frames and 0 elsewhere.
    """
    scores = np.zeros((chroma.n_frames, 25))
    scores[:, :24] = chroma.frames @ TEMPLATES.T
    silent = ~chroma.frames.any(axis=1)
    scores[silent, N_STATE] = 1.0 / 3.0
    return scores


def estimate_chords(
    chroma: ChromaMatrix, p_stay: float = 0.9, emission_weight: float = 8.0
) -> list[ChordSegment]:
    """Decode a chord segmentation from a chroma matrix.

    Viterbi decoding with self-transition probability *p_stay* and uniform
    switching mass; consecutive identical labels merge into one segment.
    *emission_weight* is the usual HMM acoustic scale: template evidence is
    raised to this power before decoding so that a chord change backed by a
    couple of frames can overcome the self-transition inertia. Relative
    major/minor triads share two of three tones, so unscaled scores would
    smear boundaries by many frames.
    """
    if chroma.n_frames == 0:
        raise ValueError("chroma must contain at least one frame")
    if not 0.0 < p_stay < 1.0:
        raise ValueError(f"p_stay must be in (0, 1), got {p_stay}")

    log_emit = emission_weight * np.log(frame_scores(chroma) + _LOG_FLOOR)
    n_states = len(CHORD_STATES)
    log_trans = np.full((n_states, n_states), np.log((1.0 - p_stay) / (n_states - 1)))
    np.fill_diagonal(log_trans, np.log(p_stay))

    n_frames = chroma.n_frames
    back = np.zeros((n_frames, n_states), dtype=int)
    cost = np.log(1.0 / n_states) + log_emit[0]
    for t in range(1, n_frames):
        candidate = cost[:, None] + log_trans
        back[t] = np.argmax(candidate, axis=0)
        cost = candidate[back[t], np.arange(n_states)] + log_emit[t]

    path = np.zeros(n_frames, dtype=int)
    path[-1] = int(np.argmax(cost))
    for t in range(n_frames - 1, 0, -1):
        path[t - 1] = back[t, path[t]]

    hop = chroma.frame_hop_s
    segments: list[ChordSegment] = []
    run_start = 0
    for t in range(1, n_frames + 1):
        if t == n_frames or path[t] != path[run_start]:
            segments.append(
                ChordSegment(
                    symbol=CHORD_STATES[path[run_start]],
                    start_s=run_start * hop,
                    end_s=t * hop,
                )
            )
            run_start = t
    return segments
