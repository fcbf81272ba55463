"""Image file I/O.

8-bit formats (PNG, PPM/PGM) load as float64 in [0, 1] (divide by 255) and
save rounded to nearest.  PFM and Radiance HDR hold linear floats and are
read and written unscaled.
"""
from __future__ import annotations

import os
import re

import numpy as np
from PIL import Image

from .errors import InvalidInputError
from .image import as_planar

LDR_EXTS = {".png", ".ppm", ".pgm", ".pnm"}
FLOAT_EXTS = {".pfm", ".hdr"}


def _ext(path) -> str:
    return os.path.splitext(str(path))[1].lower()


def read_pfm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.readline().strip()
        if header not in (b"PF", b"Pf"):
            raise InvalidInputError(f"{path}: not a PFM file")
        nc = 3 if header == b"PF" else 1
        dims = fh.readline()
        while dims.startswith(b"#"):
            dims = fh.readline()
        m = re.match(rb"^\s*(\d+)\s+(\d+)\s*$", dims)
        if not m:
            raise InvalidInputError(f"{path}: malformed PFM dimensions")
        w, h = int(m.group(1)), int(m.group(2))
        scale = float(fh.readline().strip())
        dtype = "<f4" if scale < 0 else ">f4"
        data = np.frombuffer(fh.read(), dtype=dtype)
    if data.size != w * h * nc:
        raise InvalidInputError(f"{path}: expected {w * h * nc} samples, found {data.size}")
    # PFM stores rows bottom to top.
    img = data.reshape(h, w, nc)[::-1].astype(np.float64)
    return img


def write_pfm(path, img) -> None:
    """Write a little-endian PFM (scale field ``-1.0``)."""
    arr = as_planar(img)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    h, w, nc = arr.shape
    header = b"PF\n" if nc == 3 else b"Pf\n"
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(f"{w} {h}\n".encode())
        fh.write(b"-1.0\n")
        fh.write(np.ascontiguousarray(arr[::-1], dtype="<f4").tobytes())


def _read_hdr(path) -> np.ndarray:
    import cv2

    bgr = cv2.imread(str(path), cv2.IMREAD_ANYDEPTH | cv2.IMREAD_COLOR)
    if bgr is None:
        raise OSError(f"cannot decode Radiance HDR file {path}")
    return bgr[:, :, ::-1].astype(np.float64)


def _write_hdr(path, img) -> None:
    import cv2

    arr = as_planar(img)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.shape[2] == 1:
        arr = np.repeat(arr, 3, axis=2)
    if not cv2.imwrite(str(path), np.ascontiguousarray(arr[:, :, ::-1], dtype=np.float32)):
        raise OSError(f"cannot write Radiance HDR file {path}")


def read_image(path) -> np.ndarray:
    """Read an image as an ``(H, W, C)`` float64 array."""
    ext = _ext(path)
    if ext == ".pfm":
        return read_pfm(path)
    if ext == ".hdr":
        return _read_hdr(path)
    with Image.open(path) as im:
        if im.mode not in ("L", "RGB"):
            im = im.convert("RGB" if "A" in im.mode or im.mode in ("P", "CMYK") else "L")
        arr = np.asarray(im, dtype=np.float64) / 255.0
    if arr.ndim == 2:
        arr = arr[:, :, None]
    return arr


def to_uint8(img) -> np.ndarray:
    arr = np.clip(as_planar(img), 0.0, 1.0)
    return np.rint(arr * 255.0).astype(np.uint8)


def write_image(path, img) -> None:
    ext = _ext(path)
    if ext == ".pfm":
        write_pfm(path, img)
        return
    if ext == ".hdr":
        _write_hdr(path, img)
        return
    if ext not in LDR_EXTS:
        raise InvalidInputError(f"unsupported output format {ext!r}")
    arr = to_uint8(img)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    Image.fromarray(arr).save(path)
