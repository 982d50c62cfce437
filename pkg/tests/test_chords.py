"""Template-HMM chord estimation against synthesized triads."""

from __future__ import annotations

import numpy as np
import pytest

from symaudio.dsp.chords import CHORD_STATES, N_STATE, estimate_chords, frame_scores
from symaudio.dsp.chroma import ChromaMatrix, compute_chroma
from symaudio.dsp.synth import as_clip, silence, triad
from symaudio.model import CHORD_SYMBOLS, PITCH_CLASSES

SR = 22050


def _chroma_for(samples: np.ndarray) -> ChromaMatrix:
    return compute_chroma(as_clip(samples, SR))


def test_state_order_matches_chord_vocabulary():
    assert CHORD_STATES == CHORD_SYMBOLS
    assert CHORD_STATES[N_STATE] == "N"


def test_frame_scores_shape_and_silence_column():
    chroma = _chroma_for(np.concatenate([triad(0, "maj", 0.5, SR), silence(0.5, SR)]))
    scores = frame_scores(chroma)
    assert scores.shape == (chroma.n_frames, 25)
    silent = ~chroma.frames.any(axis=1)
    assert silent.any()
    # Silent frames score only on the no-chord state.
    assert (scores[silent, N_STATE] > 0).all()
    assert (scores[silent, :N_STATE] == 0).all()


def test_all_24_triads_recovered():
    for root_pc in range(12):
        for quality in ("maj", "min"):
            segments = estimate_chords(_chroma_for(triad(root_pc, quality, 2.0, SR)))
            labels = {s.symbol for s in segments if s.symbol != "N"}
            assert labels == {f"{PITCH_CLASSES[root_pc]}:{quality}"}, (
                root_pc,
                quality,
                segments,
            )


def test_segments_tile_time_axis():
    chroma = _chroma_for(np.concatenate([triad(0, "maj", 1.0, SR), triad(7, "maj", 1.0, SR)]))
    segments = estimate_chords(chroma)
    assert segments[0].start_s == 0.0
    assert segments[-1].end_s == pytest.approx(chroma.end_s)
    for prev, cur in zip(segments, segments[1:]):
        assert prev.end_s == pytest.approx(cur.start_s)
        assert prev.symbol != cur.symbol


def test_two_chord_boundary_within_two_hops():
    chroma = _chroma_for(np.concatenate([triad(0, "maj", 1.0, SR), triad(9, "min", 1.0, SR)]))
    segments = [s for s in estimate_chords(chroma) if s.symbol != "N"]
    assert [s.symbol for s in segments] == ["C:maj", "A:min"]
    boundary = segments[0].end_s
    assert abs(boundary - 1.0) <= 2 * chroma.frame_hop_s


def test_silence_decodes_to_no_chord():
    segments = estimate_chords(_chroma_for(silence(1.0, SR)))
    assert [s.symbol for s in segments] == ["N"]


def test_sticky_decoding_bridges_one_frame_dropout():
    # One ambiguous frame inside a long C:maj run should not split it.
    chroma = _chroma_for(triad(0, "maj", 2.0, SR))
    frames = chroma.frames.copy()
    mid = frames.shape[0] // 2
    frames[mid] = np.full(12, 1.0 / 12.0)
    patched = ChromaMatrix(frames=frames, frame_hop_s=chroma.frame_hop_s)
    segments = [s for s in estimate_chords(patched) if s.symbol != "N"]
    assert [s.symbol for s in segments] == ["C:maj"]


def test_parameter_validation():
    chroma = _chroma_for(triad(0, "maj", 0.5, SR))
    with pytest.raises(ValueError):
        estimate_chords(chroma, p_stay=0.0)
    with pytest.raises(ValueError):
        estimate_chords(chroma, p_stay=1.0)
    empty = ChromaMatrix(frames=np.zeros((0, 12)), frame_hop_s=0.1)
    with pytest.raises(ValueError):
        estimate_chords(empty)
