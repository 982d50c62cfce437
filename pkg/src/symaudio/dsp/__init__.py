"""Native signal-processing extractors operating on raw PCM."""

from symaudio.dsp.activity import detect_activity
from symaudio.dsp.chords import estimate_chords
from symaudio.dsp.chroma import ChromaMatrix, compute_chroma
from symaudio.dsp.notes import track_notes
from symaudio.dsp.wav import PcmClip, read_wav, write_wav
from symaudio.emotion import discretize_emotion

__all__ = [
    "ChromaMatrix",
    "PcmClip",
    "compute_chroma",
    "detect_activity",
    "discretize_emotion",
    "estimate_chords",
    "read_wav",
    "track_notes",
    "write_wav",
]
