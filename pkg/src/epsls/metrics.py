"""Artifact and fidelity metrics."""
from __future__ import annotations

import numpy as np

from .errors import InvalidInputError
from .image import as_planar, check_same_size

DEFAULT_REVERSAL_TAU = 0.03


def _open_differences(img: np.ndarray):
    """Forward differences without wrap-around; the last column/row is zero."""
    dx = np.zeros_like(img)
    dy = np.zeros_like(img)
    dx[:, :-1] = np.diff(img, axis=1)
    dy[:-1, :] = np.diff(img, axis=0)
    return dx, dy


def gradient_reversal_count(input_img, enhanced, tau: float = DEFAULT_REVERSAL_TAU) -> int:
    """Pixels whose gradient flips sign between ``input_img`` and ``enhanced``.

    A sample counts when, along x or y, the input gradient exceeds ``tau`` in
    magnitude and the enhanced gradient has the opposite sign.  Counts are
    summed over channels.
    """
    a = as_planar(input_img, "input")
    b = as_planar(enhanced, "enhanced")
    check_same_size(a, b, "enhanced")
    if a.shape != b.shape:
        raise InvalidInputError(f"channel mismatch: {a.shape} vs {b.shape}")
    ax, ay = _open_differences(a)
    bx, by = _open_differences(b)
    flipped = ((np.abs(ax) > tau) & (ax * bx < 0)) | ((np.abs(ay) > tau) & (ay * by < 0))
    return int(np.count_nonzero(flipped))


def max_grad_ratio(input_img, output) -> float:
    """``max |grad output| / max |grad input|`` over both axes (open boundaries)."""
    a = as_planar(input_img)
    b = as_planar(output)
    ga = max(np.abs(d).max() for d in _open_differences(a))
    gb = max(np.abs(d).max() for d in _open_differences(b))
    return float(gb / ga) if ga > 0 else float("inf") if gb > 0 else 1.0


def psnr(a, b, peak: float = 1.0) -> float:
    mse = float(np.mean((as_planar(a) - as_planar(b)) ** 2))
    if mse == 0:
        return float("inf")
    return 10.0 * np.log10(peak * peak / mse)
