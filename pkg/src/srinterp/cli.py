"""Command-line interface.

Commands: table1, upscale, filter, metrics, piqe, piqe-series, hist,
scanconvert, bench.  Exit codes: 0 success, 1 usage error, 2 data/format
error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .bench import DEFAULT_SEEDS, BenchConfig, run_bench
from .errors import SrinterpError
from .filters import FilterSettings, gaussian_smooth, smooth_then_sharpen, unsharp_mask
from .interp import METHODS, subscripts, upscale
from .metrics import mse, piqe, piqe_series, piqe_series_mean, psnr, ssim
from .raster import (empty_bins, histogram, read_frames, read_pgm,
                     write_frames, write_pgm)
from .rng import DrawStream, read_r_file
from .rounding import dr, round_subscript_vector, RoundingStrategy
from .scanconv import SectorGeometry, convert_sequence

SEED_ENV = "SRINTERP_SEED"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _default_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get(SEED_ENV, "0"))


def _stream_for(args, method: str) -> DrawStream | None:
    if not method.startswith("nni-sr"):
        return None
    if getattr(args, "r_file", None):
        return DrawStream.from_values(read_r_file(Path(args.r_file).read_text()))
    return DrawStream.from_seed(_default_seed(args))


def _filter_settings(args) -> FilterSettings:
    return FilterSettings(
        gaussian_sigma=args.smooth_sigma,
        unsharp_radius=args.sharpen_radius,
        unsharp_amount=args.sharpen_amount,
        unsharp_threshold=args.sharpen_threshold,
    )


def _add_filter_flags(p):
    p.add_argument("--smooth-sigma", type=float, default=0.5)
    p.add_argument("--sharpen-radius", type=float, default=1.0)
    p.add_argument("--sharpen-amount", type=float, default=0.8)
    p.add_argument("--sharpen-threshold", type=int, default=0)


def cmd_table1(args) -> int:
    draws = read_r_file(Path(args.r_file).read_text())
    xs = subscripts(args.src_len, args.ratio)
    if len(draws) < len(xs):
        raise SrinterpError(
            f"r-file supplies {len(draws)} draws, need {len(xs)}")
    t0 = time.perf_counter()
    dr_col = [dr(x).index for x in xs]
    dr_sec = time.perf_counter() - t0
    stream = DrawStream.from_values(draws)
    t0 = time.perf_counter()
    sr_col = [o.index for o in
              round_subscript_vector(xs, RoundingStrategy.SR_EQ3, stream)]
    sr_sec = time.perf_counter() - t0
    print("x,r,dr,sr")
    for x, r, d, s in zip(xs, draws, dr_col, sr_col):
        print(f"{x:.4f},{r:.1f},{d},{s}")
    print(f"# dr_sec={dr_sec:.3e} sr_sec={sr_sec:.3e}")
    return 0


def cmd_upscale(args) -> int:
    img = read_pgm(Path(args.input).read_bytes())
    stream = _stream_for(args, args.method)
    out = upscale(img, args.ratio, args.method, stream)
    Path(args.out).write_bytes(write_pgm(out))
    return 0


def cmd_filter(args) -> int:
    img = read_pgm(Path(args.input).read_bytes())
    settings = _filter_settings(args)
    op = {"smooth": gaussian_smooth, "sharpen": unsharp_mask,
          "both": smooth_then_sharpen}[args.op]
    Path(args.out).write_bytes(write_pgm(op(img, settings)))
    return 0


def cmd_metrics(args) -> int:
    ref = read_pgm(Path(args.ref).read_bytes())
    test = read_pgm(Path(args.test).read_bytes())
    m = mse(ref, test)
    p = psnr(ref, test)
    result = {
        "mse": m,
        "psnr": None if p == float("inf") else p,
        "identical": m == 0.0,
        "ssim": ssim(ref, test),
    }
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


def cmd_piqe(args) -> int:
    img = read_pgm(Path(args.input).read_bytes())
    res = piqe(img)
    print(json.dumps({
        "score": res.score,
        "label": res.label,
        "active_block_count": res.active_block_count,
        "distorted_block_ratio": res.distorted_block_ratio,
    }, indent=2, sort_keys=True))
    return 0


def cmd_piqe_series(args) -> int:
    seq = read_frames(Path(args.frames).read_bytes())
    series = piqe_series(seq, args.interval_ms)
    print("timestamp_ms,score,label")
    for t, res in series:
        print(f"{t:.1f},{res.score:.4f},{res.label}")
    print(f"mean,{piqe_series_mean(series):.4f},")
    return 0


def cmd_hist(args) -> int:
    img = read_pgm(Path(args.input).read_bytes())
    h = histogram(img)
    out = {"counts": list(h.counts), "total": h.total,
           "empty_bin_count": len(empty_bins(h))}
    print(json.dumps(out))
    return 0


def cmd_scanconvert(args) -> int:
    seq = read_frames(Path(args.frames).read_bytes())
    geom = SectorGeometry.from_json(Path(args.geometry).read_text())
    out = convert_sequence(seq, geom, args.method, _default_seed(args))
    Path(args.out).write_bytes(write_frames(out))
    return 0


def cmd_bench(args) -> int:
    seeds = (tuple(int(s) for s in args.seeds.split(",")) if args.seeds
             else DEFAULT_SEEDS)
    config = BenchConfig(
        input_dir=Path(args.input_dir),
        ref_dir=Path(args.ref_dir),
        methods=tuple(args.methods.split(",")),
        ratio=args.ratio,
        seeds=seeds,
        filter_settings=_filter_settings(args),
        apply_filters=args.apply_filters,
    )
    report = run_bench(config, include_timestamp=not args.no_timestamp)
    csv_text = report.to_csv()
    if args.out_prefix:
        Path(f"{args.out_prefix}.csv").write_text(csv_text)
        Path(f"{args.out_prefix}.json").write_text(report.to_json())
    if args.json:
        print(report.to_json())
    else:
        print(csv_text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="srinterp", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="golden subscript-rounding table")
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--src-len", type=int, default=3)
    p.add_argument("--r-file", required=True)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("upscale", help="upscale a PGM image")
    p.add_argument("--input", required=True)
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--method", choices=METHODS, default="nni-dr")
    p.add_argument("--seed", type=int)
    p.add_argument("--r-file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_upscale)

    p = sub.add_parser("filter", help="smooth and/or sharpen a PGM image")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--op", choices=("smooth", "sharpen", "both"), default="both")
    _add_filter_flags(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("metrics", help="full-reference metrics as JSON")
    p.add_argument("--ref", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("piqe", help="no-reference PIQE score")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_piqe)

    p = sub.add_parser("piqe-series", help="PIQE sampled over a frame sequence")
    p.add_argument("--frames", required=True)
    p.add_argument("--interval-ms", type=float, default=78.0)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_piqe_series)

    p = sub.add_parser("hist", help="256-bin histogram as JSON")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("scanconvert", help="polar-to-Cartesian sector conversion")
    p.add_argument("--frames", required=True)
    p.add_argument("--geometry", required=True)
    p.add_argument("--method", default="nni-dr",
                   choices=("nni-dr", "nni-sr-eq3", "bilinear", "bicubic"))
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scanconvert)

    p = sub.add_parser("bench", help="quality benchmark over paired images")
    p.add_argument("--input-dir", required=True)
    p.add_argument("--ref-dir", required=True)
    p.add_argument("--methods", default="nni-dr,nni-sr-eq3")
    p.add_argument("--ratio", type=int, default=4)
    p.add_argument("--seeds", help="comma-separated seed list")
    p.add_argument("--apply-filters", default="both",
                   choices=("before-only", "after-only", "both"))
    p.add_argument("--out-prefix")
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-timestamp", action="store_true")
    _add_filter_flags(p)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, SrinterpError, json.JSONDecodeError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
