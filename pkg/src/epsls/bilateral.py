"""Bilateral filtering: exact windowed sum and the bilateral-grid approximation.

Both backends accept a separate guide image (joint / cross bilateral
filtering).  Passing ``guide=src`` gives the classic self-guided filter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from . import _kernels
from .errors import InvalidInputError, ParameterError
from .image import as_planar, channels, check_same_size, planes, stack_like


def _check_positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class RangeSpatialParams:
    """Spatial std ``sigma_s`` in pixels and range std ``sigma_r`` in [0, 1] units."""

    sigma_s: float
    sigma_r: float

    def __post_init__(self):
        _check_positive("sigma_s", self.sigma_s)
        _check_positive("sigma_r", self.sigma_r)


@dataclass(frozen=True)
class GridParams:
    """Bilateral-grid cell sizes.  ``None`` means "use the matching sigma"."""

    spatial_sampling: float | None = None
    range_sampling: float | None = None

    def __post_init__(self):
        if self.spatial_sampling is not None:
            _check_positive("spatial_sampling", self.spatial_sampling)
        if self.range_sampling is not None:
            _check_positive("range_sampling", self.range_sampling)

    def resolve(self, p: RangeSpatialParams) -> tuple[float, float]:
        ss = self.spatial_sampling if self.spatial_sampling is not None else p.sigma_s
        sr = self.range_sampling if self.range_sampling is not None else p.sigma_r
        return float(ss), float(sr)


def _guide_for(src: np.ndarray, guide) -> np.ndarray:
    guide = as_planar(guide, "guide")
    check_same_size(src, guide)
    if channels(guide) not in (1, channels(src)):
        raise InvalidInputError(
            f"guide has {channels(guide)} channels; expected 1 or {channels(src)}")
    return guide


def blf_brute(src, guide, p: RangeSpatialParams) -> np.ndarray:
    """Direct evaluation of the bilateral sum over a clipped square window.

    The window radius is ``ceil(3 * sigma_s)``.  The range distance is the
    Euclidean norm across guide channels; every source channel shares the
    same weights.
    """
    src = as_planar(src, "src")
    guide = _guide_for(src, guide)
    h, w = src.shape[:2]
    r = int(math.ceil(3.0 * p.sigma_s))

    s3 = src.reshape(h, w, -1)
    g3 = guide.reshape(h, w, -1)
    # Out-of-image samples carry zero weight through `valid`.
    spad = np.pad(s3, ((r, r), (r, r), (0, 0)))
    gpad = np.pad(g3, ((r, r), (r, r), (0, 0)))
    valid = np.pad(np.ones((h, w)), r)

    inv_s = -0.5 / p.sigma_s ** 2
    inv_r = -0.5 / p.sigma_r ** 2
    num = np.zeros_like(s3)
    den = np.zeros((h, w))
    for dy in range(-r, r + 1):
        rows = slice(r + dy, r + dy + h)
        for dx in range(-r, r + 1):
            cols = slice(r + dx, r + dx + w)
            diff = gpad[rows, cols] - g3
            dist2 = np.einsum("ijc,ijc->ij", diff, diff)
            wgt = math.exp(inv_s * (dx * dx + dy * dy)) * np.exp(inv_r * dist2) * valid[rows, cols]
            den += wgt
            num += wgt[:, :, None] * spad[rows, cols]
    out = num / den[:, :, None]
    return out.reshape(src.shape)


def _grid_blur_kernel(sigma_cells: float) -> np.ndarray:
    radius = max(1, int(math.ceil(2.0 * sigma_cells)))
    k = np.arange(-radius, radius + 1, dtype=np.float64)
    wk = np.exp(-0.5 * (k / sigma_cells) ** 2)
    return wk / wk.sum()


def _grid_filter_plane(values: list[np.ndarray], guide: np.ndarray,
                       p: RangeSpatialParams, ss: float, sr: float) -> list[np.ndarray]:
    h, w = guide.shape
    # Trilinear splat and slice each add 1/6 cell^2 of variance per axis.
    sig_xy = math.sqrt(max((p.sigma_s / ss) ** 2 - 1.0 / 3.0, 0.25))
    sig_r = math.sqrt(max((p.sigma_r / sr) ** 2 - 1.0 / 3.0, 0.25))
    kxy = _grid_blur_kernel(sig_xy)
    kr = _grid_blur_kernel(sig_r)
    pxy = (len(kxy) - 1) // 2 + 1
    pr = (len(kr) - 1) // 2 + 1

    gmin = float(guide.min())
    gmax = float(guide.max())
    gx = int((w - 1) / ss) + 1 + 2 * pxy
    gy = int((h - 1) / ss) + 1 + 2 * pxy
    gz = int((gmax - gmin) / sr) + 1 + 2 * pr

    vals = np.stack(values, axis=2)
    g = np.ascontiguousarray(guide)
    grid = _kernels.grid_splat(vals, g, ss, pxy, sr, pr, (gy, gx, gz))
    grid = ndimage.convolve1d(grid, kxy, axis=0, mode="constant")
    grid = ndimage.convolve1d(grid, kxy, axis=1, mode="constant")
    grid = ndimage.convolve1d(grid, kr, axis=2, mode="constant")
    out = _kernels.grid_slice(grid, g, ss, pxy, sr, pr)
    return [out[:, :, c] for c in range(len(values))]


def blf_grid(src, guide, p: RangeSpatialParams, gp: GridParams | None = None) -> np.ndarray:
    """Bilateral-grid approximation of :func:`blf_brute` (scalar guide only).

    Samples are splatted trilinearly into a ``(y/ss, x/ss, r/sr)`` grid,
    the grid is blurred with a small Gaussian along each axis, then sliced
    trilinearly.  The blur std is reduced so that blur plus the two
    interpolation tents together match ``sigma/sampling`` cells.
    """
    src = as_planar(src, "src")
    guide = _guide_for(src, guide)
    if channels(guide) != 1:
        raise InvalidInputError("blf_grid needs a single-channel guide; pass luminance or filter per channel")
    gp = gp or GridParams()
    ss, sr = gp.resolve(p)
    g2 = guide if guide.ndim == 2 else guide[:, :, 0]
    out = _grid_filter_plane(planes(src), g2, p, ss, sr)
    return stack_like(out, src)
