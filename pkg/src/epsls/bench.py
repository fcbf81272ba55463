"""Runtime benchmark over the implemented smoothers.

Each method is timed on a synthetic RGB image per requested size (median of
``k`` runs after one warm-up, file I/O excluded).  Artifact metrics are
measured once per method on the bundled detail-enhancement image.
"""
from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import corpus
from ._parallel import ordered_map, resolve_threads
from .applications import enhance_with_base
from .bilateral import RangeSpatialParams, blf_grid
from .domain_transform import DtParams, nc_filter
from .errors import ParameterError
from .image import as_planar, planes, stack_like
from .metrics import gradient_reversal_count, max_grad_ratio
from .pipelines import SmootherSpec, smooth

CSV_COLUMNS = ("method", "width", "height", "seconds", "reversals", "max_grad_ratio")
BENCH_BOOST = 5.0


def _blf(img, threads):
    p = RangeSpatialParams(12.0, 0.08)
    return stack_like(ordered_map(lambda c: blf_grid(c, c, p), planes(img), threads), img)


def _nc(img, threads):
    return nc_filter(img, img, DtParams(12.0, 0.2))


def _smoother(spec: SmootherSpec):
    return lambda img, threads: smooth(img, spec, threads=threads)


METHODS: dict[str, Callable[[np.ndarray, int], np.ndarray]] = {
    "blf": _blf,
    "nc": _nc,
    "ls": _smoother(SmootherSpec.ls(1024.0, pad=16)),
    "ls-nopad": _smoother(SmootherSpec.ls(1024.0, pad=0)),
    "wls": _smoother(SmootherSpec.wls(0.8, 1.2)),
    "blf-ls": _smoother(SmootherSpec.blf_ls(6.0, 0.02)),
    "nc-ls": _smoother(SmootherSpec.nc_ls(12.0, 0.07)),
}


@dataclass
class BenchRow:
    method: str
    width: int
    height: int
    seconds: float
    reversals: int
    max_grad_ratio: float


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    k: int = 3

    def seconds(self, method: str, width: int, height: int | None = None) -> float:
        height = width if height is None else height
        for r in self.rows:
            if (r.method, r.width, r.height) == (method, width, height):
                return r.seconds
        raise KeyError((method, width, height))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow([r.method, r.width, r.height, f"{r.seconds:.6f}", r.reversals,
                             f"{r.max_grad_ratio:.6f}"])
        return buf.getvalue()


def time_method(fn, img, k: int = 3, threads: int = 1) -> float:
    """Median wall-clock seconds of ``k`` calls after one warm-up call."""
    fn(img, threads)
    times = []
    for _ in range(k):
        t0 = time.perf_counter()
        fn(img, threads)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def artifact_metrics(method: str, img=None, threads: int = 1, boost: float = BENCH_BOOST):
    """(reversal count of the boosted enhancement, max gradient ratio of the base)."""
    img = corpus.load("detail") if img is None else as_planar(img)
    base = METHODS[method](img, threads)
    enhanced = enhance_with_base(img, base, boost)
    return gradient_reversal_count(img, enhanced), max_grad_ratio(img, base)


def run_bench(sizes=(1024,), methods=("blf", "nc", "ls", "ls-nopad", "wls", "blf-ls", "nc-ls"),
              k: int = 3, threads: int | None = None, with_metrics: bool = True) -> BenchReport:
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ParameterError(f"unknown method(s) {unknown}; available: {sorted(METHODS)}")
    if k < 3:
        raise ParameterError(f"k must be at least 3, got {k}")
    threads = resolve_threads(threads)
    metrics = {}
    if with_metrics:
        detail = corpus.load("detail")
        metrics = {m: artifact_metrics(m, detail, threads) for m in methods}
    report = BenchReport(k=k)
    for size in sizes:
        img = corpus.synthetic_color(size, size)
        for m in methods:
            secs = time_method(METHODS[m], img, k, threads)
            rev, ratio = metrics.get(m, (-1, float("nan")))
            report.rows.append(BenchRow(m, size, size, secs, rev, ratio))
    return report
