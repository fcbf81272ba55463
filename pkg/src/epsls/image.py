"""Planar image helpers shared by every filter and solver.

Images are plain ``numpy`` arrays.  A *planar image* is either a 2-D
``(H, W)`` array (single channel) or a 3-D ``(H, W, C)`` array with
``C`` in ``{1, 3}``.  Functions preserve the dimensionality they are given.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .errors import InvalidInputError, ParameterError

REC709 = np.array([0.2126, 0.7152, 0.0722])
LOG_FLOOR = 1e-6


def as_planar(img, name: str = "image") -> np.ndarray:
    """Validate ``img`` and return it as a float64 array (no copy if possible)."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 3:
        if arr.shape[2] not in (1, 3):
            raise InvalidInputError(f"{name}: expected 1 or 3 channels, got {arr.shape[2]}")
    elif arr.ndim != 2:
        raise InvalidInputError(f"{name}: expected a 2-D or 3-D array, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInputError(f"{name}: empty image of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name}: contains NaN or Inf samples")
    return arr


def channels(img: np.ndarray) -> int:
    return 1 if img.ndim == 2 else img.shape[2]


def planes(img: np.ndarray) -> list[np.ndarray]:
    """Split an image into a list of 2-D channel planes."""
    if img.ndim == 2:
        return [img]
    return [img[:, :, c] for c in range(img.shape[2])]


def stack_like(planes_: list[np.ndarray], like: np.ndarray) -> np.ndarray:
    """Inverse of :func:`planes`, restoring the dimensionality of ``like``."""
    if like.ndim == 2:
        return planes_[0]
    return np.stack(planes_, axis=2)


def check_same_size(a: np.ndarray, b: np.ndarray, what: str = "guide") -> None:
    if a.shape[:2] != b.shape[:2]:
        raise InvalidInputError(f"{what} size {b.shape[:2]} does not match image size {a.shape[:2]}")


@dataclass(frozen=True)
class NormalizationRecord:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.hi <= self.lo:
            raise ParameterError(f"normalization record needs finite hi > lo, got ({self.lo}, {self.hi})")


class GradientField(NamedTuple):
    gx: np.ndarray
    gy: np.ndarray


def normalize_to_unit(img) -> tuple[np.ndarray, NormalizationRecord]:
    """Affinely map ``img`` onto [0, 1].

    A constant image maps to zeros with the record ``(lo, lo + 1)`` so that
    :func:`denormalize` stays exact.
    """
    arr = as_planar(img)
    lo = float(arr.min())
    hi = float(arr.max())
    if hi == lo:
        return np.zeros_like(arr), NormalizationRecord(lo, lo + 1.0)
    out = (arr - lo) / (hi - lo)
    np.clip(out, 0.0, 1.0, out=out)
    return out, NormalizationRecord(lo, hi)


def denormalize(img, rec: NormalizationRecord) -> np.ndarray:
    arr = as_planar(img)
    return rec.lo + arr * (rec.hi - rec.lo)


def forward_gradients(img) -> GradientField:
    """Circular forward differences along x (columns) and y (rows).

    ``gx[i, j] = img[i, (j+1) % W] - img[i, j]`` and likewise for ``gy``
    along rows.  The periodic boundary matches the Fourier-domain solver.
    """
    arr = as_planar(img)
    gx = np.roll(arr, -1, axis=1) - arr
    gy = np.roll(arr, -1, axis=0) - arr
    return GradientField(gx, gy)


def gaussian_kernel1d(sigma: float, radius: int | None = None) -> np.ndarray:
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    if radius is None:
        radius = int(math.ceil(3.0 * sigma))
    k = np.arange(-radius, radius + 1, dtype=np.float64)
    w = np.exp(-0.5 * (k / sigma) ** 2)
    return w / w.sum()


def gaussian_blur(img, sigma: float) -> np.ndarray:
    """Separable Gaussian blur, radius ``ceil(3*sigma)``, replicate boundary."""
    if not (isinstance(sigma, (int, float)) and math.isfinite(sigma) and sigma > 0):
        raise ParameterError(f"sigma must be a positive finite number, got {sigma!r}")
    arr = as_planar(img)
    kernel = gaussian_kernel1d(sigma)
    out = ndimage.correlate1d(arr, kernel, axis=0, mode="nearest")
    return ndimage.correlate1d(out, kernel, axis=1, mode="nearest")


def luminance(img) -> np.ndarray:
    """Rec. 709 luminance as a 2-D array; a single-channel image is its own luminance."""
    arr = as_planar(img)
    if arr.ndim == 2:
        return arr.copy()
    if arr.shape[2] == 1:
        return arr[:, :, 0].copy()
    return arr @ REC709


def to_log_luminance(img) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(log10(L + 1e-6), L)`` for the Rec. 709 luminance ``L``."""
    lum = luminance(img)
    return np.log10(lum + LOG_FLOOR), lum


def pad_reflect(img: np.ndarray, pad: int) -> np.ndarray:
    """Mirror-pad the two spatial axes by ``pad`` pixels (edge sample repeated)."""
    if pad == 0:
        return img
    widths = [(pad, pad), (pad, pad)] + [(0, 0)] * (img.ndim - 2)
    return np.pad(img, widths, mode="symmetric")


def crop(img: np.ndarray, pad: int) -> np.ndarray:
    if pad == 0:
        return img
    return img[pad:-pad, pad:-pad]
