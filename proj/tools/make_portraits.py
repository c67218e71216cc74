#!/usr/bin/env python3
"""Writes the 80x80 greyscale portraits used as supplied automaton content."""
import pathlib
import sys

import numpy as np


def portraits(seed=100):
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:80, 0:80] / 79.0
    shapes = {
        "homer": ((xx - 0.5) ** 2 + (yy - 0.5) ** 2 < 0.1),
        "marge": ((abs(xx - 0.5) < 0.15) & (yy > 0.1)),
        "lisa": (np.sin(np.arctan2(yy - 0.5, xx - 0.5) * 5) > 0.3),
        "bart": (np.sin(yy * 20) > 0),
    }
    return {k: np.clip(0.8 * v + 0.2 * rng.random(v.shape), 0, 1) for k, v in shapes.items()}


def main(out):
    out = pathlib.Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for name, img in portraits().items():
        px = np.round(img * 255).astype(np.uint8)
        with open(out / f"{name}.pgm", "wb") as f:
            f.write(b"P5\n80 80\n255\n" + px.tobytes())


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/automata/portraits")
