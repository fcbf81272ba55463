"""Command-line front end: ``epsls <subcommand> ...``.

Exit codes: 0 success, 1 runtime failure (e.g. unreadable input), 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from . import applications as apps
from .bench import METHODS, run_bench
from .domain_transform import DtParams
from .errors import EpslsError, InvalidInputError, ParameterError
from .io import read_image, write_image
from .pipelines import RollingParams, SmootherSpec, smooth
from .solver import SolveParams

log = logging.getLogger("epsls")

# Per-subcommand defaults: method, sigma_s, sigma_r
DEFAULTS = {
    "smooth": ("blf-ls", 12.0, 0.04),
    "enhance": ("blf-ls", 6.0, 0.02),
    "tonemap": ("nc-ls", 12.0, 0.05),
    "joint": ("blf-ls", 12.0, 0.003),
    "texture": ("nc-ls", 8.0, 0.02),
    "clipart": ("nc-ls", 6.0, 0.02),
}
ROLLING_DEFAULTS = {"texture": (3, 2.5), "clipart": (2, 0.75)}


def _add_common(p: argparse.ArgumentParser, methods: bool = True) -> None:
    if methods:
        p.add_argument("--method", choices=["ls", "wls", "blf-ls", "nc-ls"])
    p.add_argument("--sigma-s", type=float)
    p.add_argument("--sigma-r", type=float)
    p.add_argument("--lambda", dest="lam", type=float,
                   help="regularization weight (default 1024; 0.8 for wls)")
    p.add_argument("--alpha", type=float, default=1.2, help="WLS gradient exponent")
    p.add_argument("--iterations", type=int, default=3, help="domain-transform iterations")
    p.add_argument("--backend", choices=["grid", "brute"], default="grid")
    p.add_argument("--pad", type=int, default=16)
    p.add_argument("--threads", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epsls", description="Edge-preserving smoothing by "
                                     "least-squares reconstruction from filtered gradients.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("smooth", help="smooth an image")
    _add_common(p)
    p.add_argument("--guide", help="guidance image for joint filtering")
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("enhance", help="detail enhancement")
    _add_common(p)
    p.add_argument("--boost", type=float, default=5.0, help="extra detail gain (0 = identity)")
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("tonemap", help="HDR tone mapping (PFM or Radiance HDR input)")
    _add_common(p)
    p.add_argument("--contrast", type=float, default=1.0, help="log10 range of the compressed base")
    p.add_argument("--saturation", type=float, default=0.6)
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("joint", help="flash/no-flash filtering")
    _add_common(p)
    p.add_argument("--guide", required=True, help="flash image")
    p.add_argument("input", help="no-flash image")
    p.add_argument("output")

    for name, text in (("texture", "texture removal"), ("clipart", "clip-art artifact removal")):
        p = sub.add_parser(name, help=f"{text} (rolling-guidance NC-LS)")
        _add_common(p, methods=False)
        p.add_argument("--n", type=int, help="rolling iterations")
        p.add_argument("--init-sigma", type=float, help="std of the initial Gaussian guide")
        p.add_argument("input")
        p.add_argument("output")

    p = sub.add_parser("bench", help="runtime and artifact benchmark, CSV output")
    p.add_argument("--sizes", type=int, nargs="+", default=[1024])
    p.add_argument("--methods", nargs="+", default=list(METHODS), choices=list(METHODS))
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--csv", help="write CSV here instead of standard output")
    p.add_argument("--no-metrics", action="store_true")
    p.add_argument("--threads", type=int)
    return parser


def _spec_from_args(args, command: str) -> SmootherSpec:
    method, ss, sr = DEFAULTS[command]
    method = getattr(args, "method", None) or method
    ss = args.sigma_s if args.sigma_s is not None else ss
    sr = args.sigma_r if args.sigma_r is not None else sr
    if method == "wls":
        return SmootherSpec.wls(args.lam if args.lam is not None else 0.8, args.alpha)
    lam = args.lam if args.lam is not None else 1024.0
    if method == "ls":
        return SmootherSpec.ls(lam, args.pad)
    if method == "blf-ls":
        return SmootherSpec.blf_ls(ss, sr, lam, args.pad, backend=args.backend)
    return SmootherSpec.nc_ls(ss, sr, lam, args.pad, iterations=args.iterations)


def _read(path):
    try:
        return read_image(path)
    except (OSError, InvalidInputError, ValueError) as exc:
        raise FileNotFoundError(f"cannot read input image {path}: {exc}") from exc


def _run(args) -> None:
    cmd = args.command
    if cmd == "bench":
        report = run_bench(args.sizes, args.methods, args.k, args.threads,
                           with_metrics=not args.no_metrics)
        text = report.to_csv()
        if args.csv:
            with open(args.csv, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return

    spec = _spec_from_args(args, cmd)
    img = _read(args.input)
    threads = args.threads

    if cmd == "smooth":
        if args.guide:
            spec = replace(spec, guidance=_read(args.guide))
        out = smooth(img, spec, threads=threads)
    elif cmd == "enhance":
        out = apps.detail_enhance(img, apps.EnhanceParams(args.boost, spec), threads=threads)
    elif cmd == "tonemap":
        out = apps.tonemap_hdr(img, apps.TonemapParams(args.contrast, args.saturation, spec),
                               threads=threads)
    elif cmd == "joint":
        out = apps.flash_no_flash(img, _read(args.guide), spec, threads=threads)
    else:
        n, init = ROLLING_DEFAULTS[cmd]
        rp = RollingParams(args.n if args.n is not None else n,
                           args.init_sigma if args.init_sigma is not None else init)
        dt = DtParams(spec.filter_params.sigma_s, spec.filter_params.sigma_r, args.iterations)
        fn = apps.texture_removal if cmd == "texture" else apps.clipart_cleanup
        out = fn(img, dt, rp, SolveParams(spec.solve_params.lam, args.pad), threads=threads)
    write_image(args.output, out)
    log.info("wrote %s", args.output)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        _run(args)
    except ParameterError as exc:
        print(f"epsls: error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, EpslsError, OSError) as exc:
        print(f"epsls: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
