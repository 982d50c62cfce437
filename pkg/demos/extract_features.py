"""Feature extraction walkthrough: synthesized audio to canonical JSON.

Synthesizes a short clip (two chords, then a beep), runs the native
extractors through the registry, and prints both the human-readable layers
and the canonical serialized form. Runs offline in a couple of seconds.

    python3 demos/extract_features.py [--out-dir DIR]
"""

from __future__ import annotations

import argparse
import tempfile
from pathlib import Path

import numpy as np

from symaudio.dsp.synth import as_clip, silence, tone, triad
from symaudio.dsp.wav import write_wav
from symaudio.registry import extract_all, native_registry
from symaudio.serialize import serialize_bundle

SR = 22050


def make_demo_clip():
    parts = [
        triad(0, "maj", 1.2, SR),   # C major
        triad(9, "min", 1.2, SR),   # A minor
        silence(0.3, SR),
        tone(880.0, 0.4, SR),       # a beep the event tagger should catch
    ]
    return as_clip(np.concatenate(parts), SR)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--out-dir", type=Path, default=None,
        help="keep the WAV and feature JSON here instead of a temp dir",
    )
    args = parser.parse_args(argv)

    with tempfile.TemporaryDirectory() as tmp:
        out_dir = args.out_dir or Path(tmp)
        out_dir.mkdir(parents=True, exist_ok=True)
        wav_path = out_dir / "demo_clip.wav"
        write_wav(wav_path, make_demo_clip())
        print(f"wrote {wav_path}")

        bundle = extract_all(wav_path, native_registry())

        print("\n== extracted layers ==")
        for event in bundle.events:
            print(f"event   [{event.start_s:6.3f}-{event.end_s:6.3f}] {event.label}"
                  f" (confidence {event.confidence:.2f})")
        for note in bundle.notes:
            print(f"note    [{note.onset_s:6.3f}-{note.offset_s:6.3f}] midi {note.midi_pitch}")
        for chord in bundle.chords:
            print(f"chord   [{chord.start_s:6.3f}-{chord.end_s:6.3f}] {chord.symbol}")
        for layer, prov in sorted(bundle.extractor_provenance.items()):
            print(f"prov    {layer}: {prov.name} v{prov.version}")

        text = serialize_bundle(bundle)
        json_path = out_dir / "demo_clip.features.json"
        json_path.write_text(text)
        print(f"\n== canonical JSON ({len(text)} bytes) ==")
        print(text[:300] + ("..." if len(text) > 300 else ""))
        print(f"\nwrote {json_path}")
        if args.out_dir is None:
            print("(temp dir, removed on exit; pass --out-dir to keep files)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
