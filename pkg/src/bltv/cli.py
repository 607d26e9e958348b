"""Command-line front end.

Subcommands: ``synth``, ``degrade``, ``estimate``, ``restore``, ``evaluate``
and ``sample-bld``.  Exit codes: 0 success, 1 usage error, 2 I/O error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, bld, io
from .degradation import NoiseSpec, degrade, gaussian_kernel
from .estimation import EstimationConfig, estimate_maps
from .metrics import isnr, ssim
from .solver import Model, NumericalError, SolverConfig, solve
from .synthetic import GENERATORS

log = logging.getLogger("bltv")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3

CSV_VERSION = 1
ITERATION_FIELDS = ["k", "delta", "mu", "primal_res_t", "primal_res_w", "objective"]
EVALUATION_FIELDS = ["experiment", "model", "sigma", "isnr_db", "ssim"]
SAMPLE_FIELDS = ["s_h", "s_v"]


class UsageError(Exception):
    pass


class IOFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _odd_int(text: str) -> int:
    value = _positive_int(text)
    if value % 2 == 0:
        raise argparse.ArgumentTypeError(f"expected an odd integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _nonneg_float(text: str) -> float:
    value = float(text)
    if not (value >= 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _stem(out: str) -> Path:
    path = Path(out)
    return path.with_suffix("") if path.suffix.lower() in (".pfm", ".png", ".pgm", ".json") else path


def _read(path) -> np.ndarray:
    try:
        return io.read_image(path).data
    except (OSError, ValueError) as exc:
        raise IOFailure(f"cannot read image {path}: {exc}") from exc


def _sidecar(path) -> dict:
    meta = io.metadata_path(path)
    if not meta.exists():
        return {}
    try:
        return io.read_metadata(meta)
    except (OSError, ValueError) as exc:
        raise IOFailure(f"cannot read metadata {meta}: {exc}") from exc


def _with_suffix(stem: Path, suffix: str) -> Path:
    return stem.parent / (stem.name + suffix)


def _write_raster(stem: Path, data, normalize: bool = False) -> None:
    stem.parent.mkdir(parents=True, exist_ok=True)
    io.write_pfm(_with_suffix(stem, ".pfm"), data)
    io.write_preview(_with_suffix(stem, ".png"), data, normalize=normalize)


def _fmt(x: float) -> str:
    return repr(float(x))


def cmd_synth(args) -> None:
    img = GENERATORS[args.kind](args.size)
    stem = _stem(args.out)
    _write_raster(stem, img.data)
    stem.parent.mkdir(parents=True, exist_ok=True)
    io.write_preview(_with_suffix(stem, ".pgm"), img.data)
    io.write_metadata(_with_suffix(stem, ".json"), {
        "kind": "synthetic", "generator": args.kind, "size": args.size,
    })


def cmd_degrade(args) -> None:
    u = _read(args.input)
    kernel = gaussian_kernel(args.blur_size, args.blur_sigma)
    if kernel.size > min(u.shape):
        raise UsageError(f"blur size {kernel.size} exceeds image dimensions")
    g = degrade(u, kernel, NoiseSpec(args.noise_sigma, args.seed))
    stem = _stem(args.out)
    _write_raster(stem, g.data)
    io.write_metadata(_with_suffix(stem, ".json"), {
        "kind": "degraded",
        "source": str(args.input),
        "blur_size": args.blur_size,
        "blur_sigma": args.blur_sigma,
        "noise_sigma": args.noise_sigma,
        "seed": args.seed,
        "width": g.width,
        "height": g.height,
    })


def _estimation_config(args) -> EstimationConfig:
    try:
        return EstimationConfig(
            radius=args.radius,
            grid_size=args.theta_grid,
            lambda_min=args.lambda_min,
            lambda_max=args.lambda_max,
            eps=args.eps,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _write_maps(stem: Path, maps) -> None:
    for name in ("lambda1", "lambda2", "theta"):
        _write_raster(_with_suffix(stem, f"_{name}"), getattr(maps, name), normalize=True)


def cmd_estimate(args) -> None:
    g = _read(args.input)
    cfg = _estimation_config(args)
    maps = estimate_maps(g, cfg)
    stem = _stem(args.out) if args.out else _stem(args.input)
    _write_maps(stem, maps)
    io.write_metadata(_with_suffix(stem, "_maps.json"), {
        "kind": "maps",
        "source": str(args.input),
        "radius": cfg.radius,
        "theta_grid": cfg.grid_size,
        "lambda_min": cfg.lambda_min,
        "lambda_max": cfg.lambda_max,
        "eps": cfg.eps,
    })


def cmd_restore(args) -> None:
    g = _read(args.input)
    meta = _sidecar(args.input)
    blur_size = args.blur_size if args.blur_size is not None else meta.get("blur_size")
    blur_sigma = args.blur_sigma if args.blur_sigma is not None else meta.get("blur_sigma")
    sigma = args.sigma if args.sigma is not None else meta.get("noise_sigma")
    if blur_size is None or blur_sigma is None:
        raise UsageError("blur kernel unknown: pass --blur-size/--blur-sigma or provide a metadata sidecar")
    if sigma is None:
        raise UsageError("noise level unknown: pass --sigma or provide a metadata sidecar")
    try:
        kernel = gaussian_kernel(int(blur_size), float(blur_sigma))
        cfg = SolverConfig(
            model=Model(args.model),
            sigma=float(sigma),
            beta_t=args.beta_t,
            beta_w=args.beta_w,
            tau=args.tau,
            max_iter=args.max_iter,
            tol=args.tol,
            map_refresh_every=args.update_every,
            estimation=_estimation_config(args),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if kernel.size > min(g.shape):
        raise UsageError(f"blur size {kernel.size} exceeds image dimensions")

    stem = _stem(args.out)
    stem.parent.mkdir(parents=True, exist_ok=True)
    log_path = _with_suffix(stem, "_iterations.csv")
    with open(log_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(ITERATION_FIELDS)

        def sink(report):
            writer.writerow([report.k] + [_fmt(getattr(report, f)) for f in ITERATION_FIELDS[1:]])

        result = solve(g, kernel, cfg, callback=sink)

    _write_raster(stem, result.u.data)
    if cfg.model is Model.BLTV:
        _write_maps(stem, result.maps)
    io.write_metadata(_with_suffix(stem, ".json"), {
        "kind": "restored",
        "source": str(args.input),
        "model": cfg.model.value,
        "sigma": cfg.sigma,
        "blur_size": kernel.size,
        "blur_sigma": float(blur_sigma),
        "beta_t": cfg.beta_t,
        "beta_w": cfg.beta_w,
        "tau": cfg.tau,
        "max_iter": cfg.max_iter,
        "tol": cfg.tol,
        "update_every": cfg.map_refresh_every,
        "radius": cfg.estimation.radius,
        "theta_grid": cfg.estimation.grid_size,
        "iterations": result.iterations,
        "csv_version": CSV_VERSION,
    })
    last = result.history[-1]
    log.info("restored in %d iterations (delta %.3e, mu %.4g)", last.k, last.delta, last.mu)


def cmd_evaluate(args) -> None:
    restored = _read(args.restored)
    observed = _read(args.observed)
    truth = _read(args.truth)
    if not (restored.shape == observed.shape == truth.shape):
        raise UsageError(
            f"image dimensions differ: {restored.shape}, {observed.shape}, {truth.shape}"
        )
    meta = _sidecar(args.restored)
    model = args.model or meta.get("model", "unknown")
    sigma = args.sigma if args.sigma is not None else meta.get("sigma", float("nan"))
    row = [args.experiment, model, _fmt(sigma), _fmt(isnr(restored, observed, truth)), _fmt(ssim(restored, truth))]

    if args.csv:
        path = Path(args.csv)
        fresh = not path.exists() or path.stat().st_size == 0
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "a", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            if fresh:
                writer.writerow(EVALUATION_FIELDS)
            writer.writerow(row)
    print(",".join(row))


def cmd_sample_bld(args) -> None:
    try:
        params = bld.BldParams(args.lambda1, args.lambda2, args.theta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    samples = bld.sample_bld(params, args.n, args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SAMPLE_FIELDS)
        for a, b in samples:
            writer.writerow([_fmt(a), _fmt(b)])


def _add_estimation_args(p) -> None:
    p.add_argument("--radius", type=_positive_int, default=8, help="window radius in pixels")
    p.add_argument("--theta-grid", type=_positive_int, default=bld.DEFAULT_GRID_SIZE,
                   help="number of candidate angles in [0, pi/2)")
    p.add_argument("--lambda-min", type=_positive_float, default=bld.DEFAULT_LAMBDA_MIN)
    p.add_argument("--lambda-max", type=_positive_float, default=bld.DEFAULT_LAMBDA_MAX)
    p.add_argument("--eps", type=_nonneg_float, default=bld.DEFAULT_SCALE_EPS,
                   help="guard added to mean absolute projections")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bltv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="write a synthetic ground-truth image")
    p.add_argument("--kind", choices=sorted(GENERATORS), default="shapes")
    p.add_argument("--size", type=_positive_int, default=64)
    p.add_argument("--out", required=True, help="output stem")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("degrade", help="blur and add Gaussian noise")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True, help="output stem")
    p.add_argument("--blur-size", type=_odd_int, default=9)
    p.add_argument("--blur-sigma", type=_positive_float, default=2.0)
    p.add_argument("--noise-sigma", type=_nonneg_float, default=20.0)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_degrade)

    p = sub.add_parser("estimate", help="estimate BLD parameter maps")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", help="output stem (defaults to the input stem)")
    _add_estimation_args(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("restore", help="restore an observation with TV-L2 or BLTV-L2")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True, help="output stem")
    p.add_argument("--model", choices=[m.value for m in Model], default=Model.BLTV.value)
    p.add_argument("--sigma", type=_positive_float, help="noise level (defaults to metadata)")
    p.add_argument("--blur-size", type=_odd_int)
    p.add_argument("--blur-sigma", type=_positive_float)
    p.add_argument("--update-every", type=_nonneg_int, default=300,
                   help="refresh maps every N iterations (0 = never)")
    p.add_argument("--max-iter", type=_positive_int, default=1500)
    p.add_argument("--tol", type=_positive_float, default=1e-6)
    p.add_argument("--beta-t", type=_positive_float, default=1.0)
    p.add_argument("--beta-w", type=_positive_float, default=1.0)
    p.add_argument("--tau", type=_positive_float, default=1.0)
    _add_estimation_args(p)
    p.set_defaults(func=cmd_restore)

    p = sub.add_parser("evaluate", help="append ISNR/SSIM of a restoration to a CSV")
    p.add_argument("--restored", required=True)
    p.add_argument("--observed", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--csv", help="CSV file to append to")
    p.add_argument("--experiment", default="default")
    p.add_argument("--model", help="model label (defaults to metadata)")
    p.add_argument("--sigma", type=float, help="noise label (defaults to metadata)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sample-bld", help="draw samples from a bivariate Laplacian")
    p.add_argument("--lambda1", type=_positive_float, required=True)
    p.add_argument("--lambda2", type=_positive_float, required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample_bld)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors exit with EXIT_USAGE, --help and --version with 0
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"bltv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IOFailure, OSError) as exc:
        print(f"bltv: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as exc:
        print(f"bltv: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
