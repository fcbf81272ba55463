"""End-to-end smoothers built from the filters and solvers.

The gradient-domain smoothers (``BLF_LS`` and ``NC_LS``) work in two steps:

1. each x/y gradient plane of the [0, 1]-normalized, mirror-padded input is
   mapped from [-1, 1] to [0, 1], smoothed with an edge-aware filter, and
   mapped back;
2. the output is the least-squares image whose gradients follow those
   smoothed gradients while staying close to the input.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Union

import numpy as np

from ._parallel import ordered_map, resolve_threads
from .bilateral import GridParams, RangeSpatialParams, blf_brute, blf_grid
from .domain_transform import DtParams, nc_filter
from .errors import InvalidInputError, ParameterError
from .image import (GradientField, as_planar, channels, check_same_size, crop, denormalize,
                    forward_gradients, gaussian_blur, normalize_to_unit, pad_reflect, planes,
                    stack_like)
from .solver import SolveParams, WlsParams, ls_solve_fft, solve_padded, wls_solve

# (gradient plane in [0, 1], guide plane(s) in [0, 1]) -> smoothed plane
GradientFilter = Callable[[np.ndarray, np.ndarray], np.ndarray]


class Kind(str, enum.Enum):
    LS = "ls"
    WLS = "wls"
    BLF_LS = "blf-ls"
    NC_LS = "nc-ls"


@dataclass(frozen=True)
class SmootherSpec:
    kind: Kind
    filter_params: Union[RangeSpatialParams, DtParams, None] = None
    solve_params: SolveParams = field(default_factory=SolveParams)
    wls_params: WlsParams = field(default_factory=WlsParams)
    guidance: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    backend: str = "grid"
    joint_color: bool = False
    gradient_filter: Optional[GradientFilter] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.BLF_LS and self.gradient_filter is None:
            if not isinstance(self.filter_params, RangeSpatialParams):
                raise ParameterError("BLF-LS needs RangeSpatialParams")
            if self.backend not in ("grid", "brute"):
                raise ParameterError(f"unknown bilateral backend {self.backend!r}")
            if self.joint_color and self.backend != "brute":
                raise ParameterError("joint_color range distance is only available on the brute backend")
        if self.kind is Kind.NC_LS and self.gradient_filter is None:
            if not isinstance(self.filter_params, DtParams):
                raise ParameterError("NC-LS needs DtParams")

    @property
    def lam(self) -> float:
        """Weight of the gradient term for this kind."""
        return self.wls_params.lam if self.kind is Kind.WLS else self.solve_params.lam

    @classmethod
    def blf_ls(cls, sigma_s=12.0, sigma_r=0.04, lam=1024.0, pad=16, **kw):
        return cls(Kind.BLF_LS, RangeSpatialParams(sigma_s, sigma_r), SolveParams(lam, pad), **kw)

    @classmethod
    def nc_ls(cls, sigma_s=12.0, sigma_r=0.05, lam=1024.0, pad=16, iterations=3, **kw):
        return cls(Kind.NC_LS, DtParams(sigma_s, sigma_r, iterations), SolveParams(lam, pad), **kw)

    @classmethod
    def ls(cls, lam=1024.0, pad=16):
        return cls(Kind.LS, solve_params=SolveParams(lam, pad))

    @classmethod
    def wls(cls, lam=0.8, alpha=1.2, eps=1e-4):
        return cls(Kind.WLS, wls_params=WlsParams(lam, alpha, eps))


@dataclass(frozen=True)
class RollingParams:
    n: int = 3
    init_sigma: float = 2.5

    MAX_ITERATIONS = 10

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not 1 <= self.n <= self.MAX_ITERATIONS:
            raise ParameterError(f"rolling iterations must be in [1, {self.MAX_ITERATIONS}], got {self.n!r}")
        if not self.init_sigma > 0:
            raise ParameterError(f"init_sigma must be positive, got {self.init_sigma!r}")


def _to_unit(v):
    return (v + 1.0) * 0.5


def _from_unit(v):
    return 2.0 * v - 1.0


def _plane_filter(spec: SmootherSpec) -> GradientFilter:
    if spec.gradient_filter is not None:
        return spec.gradient_filter
    p = spec.filter_params
    if spec.kind is Kind.NC_LS:
        return lambda v, guide: nc_filter(v, guide, p)
    if spec.backend == "brute":
        return lambda v, guide: blf_brute(v, guide, p)
    return lambda v, guide: blf_grid(v, guide, p, GridParams())


def gradient_targets(gp: np.ndarray, guide_p: np.ndarray | None, spec: SmootherSpec,
                     threads: int = 1) -> GradientField:
    """Edge-aware smoothed gradients of a normalized, padded image.

    Every (axis, channel) plane is filtered independently; its guide is the
    plane itself, or the matching gradient plane of ``guide_p`` for joint
    filtering.  With ``spec.joint_color`` each axis is filtered as a whole,
    with one range distance taken across all guide channels.
    """
    grads = forward_gradients(gp)
    ggrads = grads if guide_p is None else forward_gradients(guide_p)
    filt = _plane_filter(spec)
    nc = channels(gp)
    ngc = channels(ggrads.gx)

    if spec.joint_color and ngc > 1:
        jobs = [(_to_unit(grads[axis]), _to_unit(ggrads[axis])) for axis in (0, 1)]
        gx, gy = ordered_map(lambda job: _from_unit(filt(*job)), jobs, threads)
        return GradientField(gx, gy)

    jobs = []
    for axis in (0, 1):
        src_planes = planes(_to_unit(grads[axis]))
        guide_planes = planes(_to_unit(ggrads[axis]))
        for c in range(nc):
            jobs.append((src_planes[c], guide_planes[c if ngc == nc else 0]))

    out = ordered_map(lambda job: _from_unit(filt(*job)), jobs, threads)
    return GradientField(stack_like(out[:nc], gp), stack_like(out[nc:], gp))


def _prepare_guidance(g: np.ndarray, guidance, pad: int) -> np.ndarray | None:
    if guidance is None:
        return None
    guide = as_planar(guidance, "guidance")
    check_same_size(g, guide, "guidance")
    if channels(guide) not in (1, channels(g)):
        raise InvalidInputError(f"guidance has {channels(guide)} channels; expected 1 or {channels(g)}")
    unit, _ = normalize_to_unit(guide)
    return pad_reflect(unit, pad)


def _gradient_domain(unit: np.ndarray, spec: SmootherSpec, threads: int):
    pad = spec.solve_params.pad
    gp = pad_reflect(unit, pad)
    guide_p = _prepare_guidance(unit, spec.guidance, pad)
    target = gradient_targets(gp, guide_p, spec, threads)
    workers = threads if threads > 1 else None
    up = solve_padded(gp, target, spec.solve_params.lam, workers=workers)
    return up, target


def smooth(g, spec: SmootherSpec, threads: int | None = None) -> np.ndarray:
    """Smooth ``g`` with the method described by ``spec``.

    The input is normalized to [0, 1] internally and mapped back to its
    original range on return.
    """
    threads = resolve_threads(threads)
    g = as_planar(g)
    if spec.guidance is not None:
        _prepare_guidance(g, spec.guidance, 0)
    if spec.lam == 0:
        # Without the gradient term the minimizer is the input itself.
        return g.copy()
    unit, rec = normalize_to_unit(g)
    if spec.kind is Kind.LS:
        u = ls_solve_fft(unit, spec.solve_params, workers=threads if threads > 1 else None)
    elif spec.kind is Kind.WLS:
        u = wls_solve(unit, spec.wls_params)
    else:
        up, _ = _gradient_domain(unit, spec, threads)
        u = crop(up, spec.solve_params.pad)
    return denormalize(u, rec)


def gradient_fit_mse(g, spec: SmootherSpec, threads: int | None = None) -> float:
    """Mean squared difference between the output gradients and the smoothed-gradient target.

    Measured on the padded periodic grid in normalized units, where the
    solver's objective is defined.
    """
    if spec.kind not in (Kind.BLF_LS, Kind.NC_LS):
        raise ParameterError("gradient_fit_mse applies to gradient-domain smoothers only")
    unit, _ = normalize_to_unit(as_planar(g))
    up, target = _gradient_domain(unit, spec, resolve_threads(threads))
    gu = forward_gradients(up)
    return float(np.mean((gu.gx - target.gx) ** 2 + (gu.gy - target.gy) ** 2) / 2.0)


def rolling_nc_ls(g, dt: DtParams, sp: SolveParams | None = None, rp: RollingParams | None = None,
                  threads: int | None = None) -> np.ndarray:
    """Rolling-guidance NC-LS.

    Starting from a Gaussian-blurred guide, the original input is
    re-smoothed ``rp.n`` times, each round guided by the previous result.
    """
    sp = sp or SolveParams()
    rp = rp or RollingParams()
    g = as_planar(g)
    guide = gaussian_blur(g, rp.init_sigma)
    spec = SmootherSpec(Kind.NC_LS, dt, sp)
    u = g
    for _ in range(rp.n):
        u = smooth(g, replace(spec, guidance=guide), threads=threads)
        guide = u
    return u
