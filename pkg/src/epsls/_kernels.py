"""Compiled inner loops for the grid and domain-transform filters.

All loops run serially in a fixed order, so results do not depend on the
thread count used by callers.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def box_rows(values, ct, radius):
    """Sliding-window mean of each row over ``ct`` in ``(ct[x] - r, ct[x] + r]``."""
    rows, cols, nc = values.shape
    out = np.empty_like(values)
    csum = np.empty((cols + 1, nc))
    for i in range(rows):
        for c in range(nc):
            csum[0, c] = 0.0
        for j in range(cols):
            for c in range(nc):
                csum[j + 1, c] = csum[j, c] + values[i, j, c]
        lo = 0
        hi = 0
        for j in range(cols):
            lower = ct[i, j] - radius
            upper = ct[i, j] + radius
            while lo < cols and ct[i, lo] <= lower:
                lo += 1
            while hi < cols and ct[i, hi] <= upper:
                hi += 1
            inv = 1.0 / (hi - lo)
            for c in range(nc):
                out[i, j, c] = (csum[hi, c] - csum[lo, c]) * inv
    return out


@njit(cache=True)
def _cell(i, j, z, ss, pxy, sr, pr, zmin):
    cy = i / ss + pxy
    cx = j / ss + pxy
    cz = (z - zmin) / sr + pr
    iy = int(np.floor(cy))
    ix = int(np.floor(cx))
    iz = int(np.floor(cz))
    return iy, ix, iz, cy - iy, cx - ix, cz - iz


@njit(cache=True)
def grid_splat(values, guide, ss, pxy, sr, pr, shape):
    """Trilinearly accumulate ``values`` (h, w, k) and unit weights into a grid.

    Pixel ``(i, j)`` with guide value ``z`` lands at grid coordinate
    ``(i/ss + pxy, j/ss + pxy, (z - min(guide))/sr + pr)``.  The returned
    array has shape ``shape + (k + 1,)``; the last slot is the weight.
    """
    h, w, k = values.shape
    zmin = guide.min()
    grid = np.zeros((shape[0], shape[1], shape[2], k + 1))
    for i in range(h):
        for j in range(w):
            iy, ix, iz, fy, fx, fz = _cell(i, j, guide[i, j], ss, pxy, sr, pr, zmin)
            for oy in range(2):
                wy = fy if oy else 1.0 - fy
                for ox in range(2):
                    wxy = wy * (fx if ox else 1.0 - fx)
                    for oz in range(2):
                        wgt = wxy * (fz if oz else 1.0 - fz)
                        cell = grid[iy + oy, ix + ox, iz + oz]
                        for c in range(k):
                            cell[c] += wgt * values[i, j, c]
                        cell[k] += wgt
    return grid


@njit(cache=True)
def grid_slice(grid, guide, ss, pxy, sr, pr):
    """Trilinear lookup of a homogeneous grid at every pixel, divided by its weight."""
    h, w = guide.shape
    k = grid.shape[3] - 1
    zmin = guide.min()
    out = np.empty((h, w, k))
    acc = np.zeros(k + 1)
    for i in range(h):
        for j in range(w):
            iy, ix, iz, fy, fx, fz = _cell(i, j, guide[i, j], ss, pxy, sr, pr, zmin)
            for c in range(k + 1):
                acc[c] = 0.0
            for oy in range(2):
                wy = fy if oy else 1.0 - fy
                for ox in range(2):
                    wxy = wy * (fx if ox else 1.0 - fx)
                    for oz in range(2):
                        wgt = wxy * (fz if oz else 1.0 - fz)
                        cell = grid[iy + oy, ix + ox, iz + oz]
                        for c in range(k + 1):
                            acc[c] += wgt * cell[c]
            for c in range(k):
                out[i, j, c] = acc[c] / acc[k]
    return out
