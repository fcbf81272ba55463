"""Applications built on the smoothers: detail enhancement, HDR tone mapping,
flash/no-flash filtering, texture removal and clip-art cleanup."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .domain_transform import DtParams
from .errors import InvalidInputError, ParameterError
from .image import as_planar, channels, to_log_luminance
from .pipelines import RollingParams, SmootherSpec, rolling_nc_ls, smooth
from .solver import SolveParams


@dataclass(frozen=True)
class EnhanceParams:
    """``boost`` is the extra detail gain: output = input + boost * detail."""

    boost: float = 5.0
    smoother: SmootherSpec = field(default_factory=lambda: SmootherSpec.blf_ls(6.0, 0.02))

    def __post_init__(self):
        if not (math.isfinite(self.boost) and self.boost >= 0):
            raise ParameterError(f"boost must be finite and >= 0, got {self.boost!r}")

    @property
    def detail_multiplier(self) -> float:
        return 1.0 + self.boost


@dataclass(frozen=True)
class TonemapParams:
    target_contrast: float = 1.0
    saturation: float = 0.6
    smoother: SmootherSpec = field(default_factory=lambda: SmootherSpec.nc_ls(12.0, 0.05))

    def __post_init__(self):
        if not (math.isfinite(self.target_contrast) and self.target_contrast > 0):
            raise ParameterError(f"target_contrast must be positive, got {self.target_contrast!r}")
        if not (0 < self.saturation <= 1.5):
            raise ParameterError(f"saturation must lie in (0, 1.5], got {self.saturation!r}")


def enhance_with_base(g, base, boost: float, clamp: bool = True) -> np.ndarray:
    """``g + boost * (g - base)``, clamped to [0, 1] unless ``clamp`` is False."""
    g = as_planar(g)
    out = g + boost * (g - as_planar(base, "base"))
    return np.clip(out, 0.0, 1.0) if clamp else out


def detail_enhance(g, p: EnhanceParams | None = None, threads: int | None = None,
                   clamp: bool = True) -> np.ndarray:
    p = p or EnhanceParams()
    g = as_planar(g)
    base = smooth(g, p.smoother, threads=threads)
    return enhance_with_base(g, base, p.boost, clamp=clamp)


def tonemap_layers(hdr, p: TonemapParams | None = None, threads: int | None = None) -> dict:
    """Base/detail decomposition of the log luminance and the compressed result.

    Returns a dict with ``log_lum``, ``base``, ``detail``, ``scale`` and the
    compressed log luminance ``mapped``.
    """
    p = p or TonemapParams()
    hdr = as_planar(hdr, "hdr")
    if np.any(hdr < 0):
        raise ParameterError("HDR input must be non-negative")
    log_lum, lum = to_log_luminance(hdr)
    base = smooth(log_lum, p.smoother, threads=threads)
    detail = log_lum - base
    bmax = float(base.max())
    span = bmax - float(base.min())
    # A flat base has nothing to compress.
    scale = p.target_contrast / span if span > 1e-12 else 1.0
    mapped = scale * (base - bmax) + detail
    return {"log_lum": log_lum, "lum": lum, "base": base, "detail": detail,
            "scale": scale, "mapped": mapped}


def tonemap_hdr(hdr, p: TonemapParams | None = None, threads: int | None = None) -> np.ndarray:
    """Compress an HDR image to [0, 1] by scaling the base layer of its log luminance."""
    p = p or TonemapParams()
    hdr = as_planar(hdr, "hdr")
    layers = tonemap_layers(hdr, p, threads)
    new_lum = 10.0 ** layers["mapped"]
    lum = layers["lum"]
    safe = np.maximum(lum, 1e-12)
    if hdr.ndim == 2 or channels(hdr) == 1:
        out = new_lum if hdr.ndim == 2 else new_lum[:, :, None]
    else:
        ratio = hdr / safe[:, :, None]
        out = new_lum[:, :, None] * ratio ** p.saturation
    return np.clip(out, 0.0, 1.0)


def flash_no_flash(noflash, flash, spec: SmootherSpec | None = None,
                   threads: int | None = None) -> np.ndarray:
    """Smooth ``noflash`` with gradient weights taken from ``flash``."""
    spec = spec or SmootherSpec.blf_ls(12.0, 0.003)
    noflash = as_planar(noflash, "noflash")
    flash = as_planar(flash, "flash")
    if flash.shape[:2] != noflash.shape[:2]:
        raise InvalidInputError(f"flash size {flash.shape[:2]} != no-flash size {noflash.shape[:2]}")
    return smooth(noflash, replace(spec, guidance=flash), threads=threads)


def texture_removal(g, dt: DtParams | None = None, rp: RollingParams | None = None,
                    sp: SolveParams | None = None, threads: int | None = None) -> np.ndarray:
    dt = dt or DtParams(8.0, 0.02)
    rp = rp or RollingParams(3, 2.5)
    return rolling_nc_ls(g, dt, sp, rp, threads=threads)


def clipart_cleanup(g, dt: DtParams | None = None, rp: RollingParams | None = None,
                    sp: SolveParams | None = None, threads: int | None = None) -> np.ndarray:
    dt = dt or DtParams(6.0, 0.02)
    rp = rp or RollingParams(2, 0.75)
    return rolling_nc_ls(g, dt, sp, rp, threads=threads)
