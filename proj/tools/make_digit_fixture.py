#!/usr/bin/env python3
"""Builds tests/data/digits-9-4.idx3-ubyte from scikit-learn's bundled
handwritten digits (8x8, 16 gray levels), resampled to MNIST geometry: a
20x20 glyph centred in a 28x28 frame, 8-bit gray values.

Image order: three nines, three fours, then one of each of 0..3.
"""
import struct
import sys
from pathlib import Path

import numpy as np
from PIL import Image
from sklearn.datasets import load_digits


def to_mnist_frame(img8: np.ndarray) -> np.ndarray:
    gray = Image.fromarray((img8 * (255.0 / 16.0)).astype(np.uint8))
    glyph = np.asarray(gray.resize((20, 20), Image.BILINEAR))
    frame = np.zeros((28, 28), dtype=np.uint8)
    frame[4:24, 4:24] = glyph
    return frame


def main(out: Path) -> None:
    digits = load_digits()
    picks = []
    for label, count in [(9, 3), (4, 3), (0, 1), (1, 1), (2, 1), (3, 1)]:
        idx = np.flatnonzero(digits.target == label)[:count]
        picks.extend(idx.tolist())
    frames = [to_mnist_frame(digits.images[i]) for i in picks]
    with open(out, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(frames), 28, 28))
        for frame in frames:
            f.write(frame.tobytes())
    labels = [int(digits.target[i]) for i in picks]
    print(f"wrote {len(frames)} images {labels} to {out}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tests/data/digits-9-4.idx3-ubyte"))
