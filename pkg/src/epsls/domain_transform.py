"""Normalized-convolution domain-transform filter.

Each scanline is warped to the coordinate

    ct(x) = sum_{k <= x} (1 + sigma_s / sigma_r * sum_c |guide_c(k) - guide_c(k-1)|)

and box-filtered in that coordinate.  Horizontal and vertical passes
alternate for a fixed number of iterations with shrinking box radii so the
composed kernel has std ``sigma_s`` along each axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .bilateral import _check_positive
from .errors import ParameterError
from .image import as_planar, check_same_size


@dataclass(frozen=True)
class DtParams:
    sigma_s: float
    sigma_r: float
    iterations: int = 3

    def __post_init__(self):
        _check_positive("sigma_s", self.sigma_s)
        _check_positive("sigma_r", self.sigma_r)
        if not isinstance(self.iterations, (int, np.integer)) or self.iterations < 1:
            raise ParameterError(f"iterations must be a positive integer, got {self.iterations!r}")


def box_radius(sigma_s: float, i: int, n: int) -> float:
    """Half-width of the transformed-domain box for pass ``i`` (1-based) of ``n``."""
    sigma_i = sigma_s * math.sqrt(3.0) * 2.0 ** (n - i) / math.sqrt(4.0 ** n - 1.0)
    # A box of half-width r has std r / sqrt(3).
    return math.sqrt(3.0) * sigma_i


def _transform_coords(guide3: np.ndarray, ratio: float) -> np.ndarray:
    """Per-row domain coordinates of a ``(rows, cols, C)`` guide."""
    d = np.zeros(guide3.shape[:2])
    d[:, 1:] = np.abs(np.diff(guide3, axis=1)).sum(axis=2)
    return np.cumsum(1.0 + ratio * d, axis=1)


def nc_filter(src, guide, p: DtParams) -> np.ndarray:
    """Edge-aware smoothing of ``src`` with domain-transform normalized convolution.

    ``guide`` may have any number of channels; its absolute adjacent
    differences are summed across channels.  Use ``guide=src`` for
    self-guided filtering.
    """
    src = as_planar(src, "src")
    guide = as_planar(guide, "guide")
    check_same_size(src, guide)
    h, w = src.shape[:2]
    g3 = guide.reshape(h, w, -1)
    ratio = p.sigma_s / p.sigma_r

    ct_h = _transform_coords(g3, ratio)
    ct_v = _transform_coords(g3.transpose(1, 0, 2), ratio)

    out = np.ascontiguousarray(src.reshape(h, w, -1))
    n = p.iterations
    for i in range(1, n + 1):
        r = box_radius(p.sigma_s, i, n)
        out = _kernels.box_rows(out, ct_h, r)
        out = _kernels.box_rows(np.ascontiguousarray(out.transpose(1, 0, 2)), ct_v, r)
        out = np.ascontiguousarray(out.transpose(1, 0, 2))
    return out.reshape(src.shape)
