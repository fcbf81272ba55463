"""Bundled test images."""
from importlib import resources

import numpy as np

from .io import read_image

_NAMES = {
    "detail": "detail.png",     # 384x384 RGB, detail-enhancement / reversal benchmark
    "crop256": "crop256.png",   # 256x256 RGB
    "crop128": "crop128.png",   # 128x128 gray
}


def load(name: str) -> np.ndarray:
    """Load a bundled image as float64 ``(H, W, C)`` in [0, 1]."""
    try:
        fname = _NAMES[name]
    except KeyError:
        raise KeyError(f"unknown bundled image {name!r}; choose from {sorted(_NAMES)}") from None
    with resources.as_file(resources.files("epsls") / "data" / fname) as path:
        return read_image(path)


def synthetic_color(height: int, width: int, seed: int = 0) -> np.ndarray:
    """Deterministic piecewise-smooth RGB test image with edges and fine texture."""
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:height, 0:width] / max(height, width)
    out = np.empty((height, width, 3))
    for c in range(3):
        fx, fy, ph = rng.uniform(2, 6, 3)
        smooth = 0.5 + 0.25 * np.sin(2 * np.pi * fx * x + ph) * np.cos(2 * np.pi * fy * y)
        blocks = ((x * 5 + c).astype(int) + (y * 4).astype(int)) % 3 * 0.15
        out[:, :, c] = smooth * 0.6 + blocks + 0.03 * rng.standard_normal((height, width))
    return np.clip(out, 0.0, 1.0)
