"""Least-squares reconstruction solvers.

* :func:`ls_solve_fft` minimizes ``|u - g|^2 + lam * |grad u|^2``.
* :func:`lsgrad_solve_fft` minimizes ``|u - g|^2 + lam * |grad u - t|^2``
  for a target gradient field ``t``.
* :func:`wls_solve` is the edge-aware weighted variant solved with a sparse
  direct factorization.
* :func:`ls_solve_dense_oracle` assembles the normal equations densely and
  exists to cross-check the Fourier-domain path on small inputs.

The Fourier solvers assume periodic boundaries, consistent with
:func:`epsls.image.forward_gradients`.  Inputs are mirror-padded by
``SolveParams.pad`` pixels before the transform and cropped afterwards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import InvalidInputError, ParameterError, ResourceError
from .image import (GradientField, as_planar, crop, forward_gradients, luminance,
                    pad_reflect, planes, stack_like)

DEFAULT_LAMBDA = 1024.0
DENSE_ORACLE_MAX_UNKNOWNS = 4096
WLS_LOG_FLOOR = 1e-6


@dataclass(frozen=True)
class SolveParams:
    lam: float = DEFAULT_LAMBDA
    pad: int = 16

    def __post_init__(self):
        if not (isinstance(self.lam, (int, float)) and math.isfinite(self.lam) and self.lam >= 0):
            raise ParameterError(f"lambda must be finite and >= 0, got {self.lam!r}")
        if not isinstance(self.pad, (int, np.integer)) or self.pad < 0:
            raise ParameterError(f"pad must be a non-negative integer, got {self.pad!r}")


@dataclass(frozen=True)
class WlsParams:
    lam: float = 0.8
    alpha: float = 1.2
    eps: float = 1e-4

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ParameterError(f"WLS lambda must be positive, got {self.lam!r}")
        if not (math.isfinite(self.eps) and self.eps > 0):
            raise ParameterError(f"WLS eps must be positive, got {self.eps!r}")
        if not math.isfinite(self.alpha):
            raise ParameterError(f"WLS alpha must be finite, got {self.alpha!r}")


def difference_otf(height: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    """Transfer functions of the circular forward differences.

    Returned so that ``fft2(forward_gradients(x).gx) == otf_x * fft2(x)``
    under numpy's FFT sign convention, i.e.
    ``otf_x[u, v] = exp(2j*pi*v/W) - 1`` and
    ``otf_y[u, v] = exp(2j*pi*u/H) - 1``.
    """
    if height < 2 or width < 2:
        raise ParameterError(f"difference_otf needs height, width >= 2, got {height}x{width}")
    psf_x = np.zeros((height, width))
    psf_x[0, 0] = -1.0
    psf_x[0, -1] = 1.0
    psf_y = np.zeros((height, width))
    psf_y[0, 0] = -1.0
    psf_y[-1, 0] = 1.0
    return np.fft.fft2(psf_x), np.fft.fft2(psf_y)


def _half_otf(height: int, width: int):
    v = np.arange(width // 2 + 1)
    u = np.arange(height)
    otf_x = np.exp(2j * np.pi * v / width) - 1.0
    otf_y = np.exp(2j * np.pi * u / height) - 1.0
    return otf_x[None, :], otf_y[:, None]


def spectral_denominator(height: int, width: int, lam: float, half: bool = False) -> np.ndarray:
    """``1 + lam * (|F(dx)|^2 + |F(dy)|^2)`` on the full (or rfft half) grid."""
    ncols = width // 2 + 1 if half else width
    v = np.arange(ncols)
    u = np.arange(height)
    sx = 2.0 - 2.0 * np.cos(2.0 * np.pi * v / width)
    sy = 2.0 - 2.0 * np.cos(2.0 * np.pi * u / height)
    return 1.0 + lam * (sx[None, :] + sy[:, None])


def _solve_plane(g: np.ndarray, lam: float, tx=None, ty=None, workers=None) -> np.ndarray:
    h, w = g.shape
    if lam == 0:
        return g.copy()
    if h < 2 or w < 2:
        raise InvalidInputError(f"Fourier solve needs at least 2x2 samples, got {h}x{w}")
    num = scipy.fft.rfft2(g, workers=workers)
    if tx is not None:
        ox, oy = _half_otf(h, w)
        num += lam * (np.conj(ox) * scipy.fft.rfft2(tx, workers=workers)
                      + np.conj(oy) * scipy.fft.rfft2(ty, workers=workers))
    num /= spectral_denominator(h, w, lam, half=True)
    return scipy.fft.irfft2(num, s=(h, w), workers=workers)


def ls_solve_fft(g, p: SolveParams | None = None, workers: int | None = None) -> np.ndarray:
    """Homogeneous least-squares smoothing, solved per channel in the Fourier domain."""
    p = p or SolveParams()
    g = as_planar(g)
    gp = pad_reflect(g, p.pad)
    out = [_solve_plane(c, p.lam, workers=workers) for c in planes(gp)]
    return crop(stack_like(out, gp), p.pad)


def _pad_target(gp: np.ndarray, target: GradientField, pad: int) -> GradientField:
    """Embed an unpadded target in the gradients of the padded image.

    Outside the original extent, and on the wrap-around column/row of the
    original (which is meaningless once the image is padded), the target
    falls back to the padded image's own gradients.
    """
    tx, ty = forward_gradients(gp)
    h, w = target.gx.shape[:2]
    tx[pad:pad + h, pad:pad + w - 1] = target.gx[:, :w - 1]
    ty[pad:pad + h - 1, pad:pad + w] = target.gy[:h - 1, :]
    return GradientField(tx, ty)


def lsgrad_solve_fft(g, target: GradientField, p: SolveParams | None = None,
                     workers: int | None = None) -> np.ndarray:
    """Least squares pulling ``grad u`` toward ``target``, per channel.

    With ``target == forward_gradients(g)`` the result is ``g`` itself.
    """
    p = p or SolveParams()
    g = as_planar(g)
    tx = as_planar(target.gx, "target.gx")
    ty = as_planar(target.gy, "target.gy")
    if tx.shape != g.shape or ty.shape != g.shape:
        raise InvalidInputError(
            f"target shapes {tx.shape}, {ty.shape} do not match image shape {g.shape}")
    gp = pad_reflect(g, p.pad)
    if p.pad:
        tx, ty = _pad_target(gp, GradientField(tx, ty), p.pad)
    out = solve_padded(gp, GradientField(tx, ty), p.lam, workers=workers)
    return crop(out, p.pad)


def solve_padded(gp: np.ndarray, target: GradientField, lam: float,
                 workers: int | None = None) -> np.ndarray:
    """Fourier solve on an already padded image and target (no crop)."""
    out = [_solve_plane(c, lam, tx, ty, workers=workers)
           for c, tx, ty in zip(planes(gp), planes(target.gx), planes(target.gy))]
    return stack_like(out, gp)


def _wls_matrix(log_lum: np.ndarray, p: WlsParams) -> sp.csc_matrix:
    """Assemble ``I + lam * (Dx^T Wx Dx + Dy^T Wy Dy)`` with open boundaries."""
    h, w = log_lum.shape
    n = h * w
    wx = np.zeros((h, w))
    wy = np.zeros((h, w))
    wx[:, :-1] = p.lam / (np.abs(np.diff(log_lum, axis=1)) ** p.alpha + p.eps)
    wy[:-1, :] = p.lam / (np.abs(np.diff(log_lum, axis=0)) ** p.alpha + p.eps)
    wx = wx.ravel()
    wy = wy.ravel()
    # Each pixel's diagonal collects the weights of its four incident edges.
    west = np.concatenate(([0.0], wx[:-1]))
    north = np.concatenate((np.zeros(w), wy[:-w]))
    diag = 1.0 + wx + wy + west + north
    return sp.diags([diag, -wx[:-1], -wx[:-1], -wy[:-w], -wy[:-w]],
                    [0, 1, -1, w, -w], shape=(n, n), format="csc")


def wls_system(g, p: WlsParams) -> sp.csc_matrix:
    """The WLS system matrix for a [0, 1] image ``g`` (weights from log luminance)."""
    lum = luminance(as_planar(g))
    return _wls_matrix(np.log(lum + WLS_LOG_FLOOR), p)


def wls_solve(g, p: WlsParams | None = None) -> np.ndarray:
    """Weighted least-squares smoothing by sparse LU factorization.

    Weights are ``1 / (|d log L|^alpha + eps)`` on the luminance ``L`` of
    ``g``; all channels share one factorization.
    """
    p = p or WlsParams()
    g = as_planar(g)
    h, w = g.shape[:2]
    a = wls_system(g, p)
    rhs = g.reshape(h * w, -1)
    try:
        lu = spla.splu(a, permc_spec="MMD_AT_PLUS_A")
        u = lu.solve(rhs)
    except MemoryError as exc:
        raise ResourceError(f"WLS factorization of a {h}x{w} system ran out of memory") from exc
    return u.reshape(g.shape)


def circular_difference_matrices(height: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense circular forward-difference operators on row-major raveled images."""
    n = height * width
    idx = np.arange(n).reshape(height, width)
    dx = -np.eye(n)
    dy = -np.eye(n)
    dx[idx.ravel(), np.roll(idx, -1, axis=1).ravel()] += 1.0
    dy[idx.ravel(), np.roll(idx, -1, axis=0).ravel()] += 1.0
    return dx, dy


def ls_solve_dense_oracle(g, target: GradientField | None = None, lam: float = DEFAULT_LAMBDA) -> np.ndarray:
    """Solve ``(I + lam L^T L) u = g + lam L^T t`` by dense factorization.

    ``L`` stacks the circular x and y differences.  Refuses images with
    more than 4096 pixels.
    """
    g = as_planar(g)
    h, w = g.shape[:2]
    if h * w > DENSE_ORACLE_MAX_UNKNOWNS:
        raise ResourceError(f"dense oracle is capped at {DENSE_ORACLE_MAX_UNKNOWNS} pixels, got {h * w}")
    dx, dy = circular_difference_matrices(h, w)
    a = np.eye(h * w) + lam * (dx.T @ dx + dy.T @ dy)
    out = []
    for c, plane in enumerate(planes(g)):
        b = plane.ravel().copy()
        if target is not None:
            tx = planes(as_planar(target.gx))[c].ravel()
            ty = planes(as_planar(target.gy))[c].ravel()
            b += lam * (dx.T @ tx + dy.T @ ty)
        out.append(np.linalg.solve(a, b).reshape(h, w))
    return stack_like(out, g)
