"""Command-line front end: ``ssmgm {rectify,match,eval,depth,bench}``."""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import evalkit, oracle, pixelio, rectify
from .aggregator import match_frame
from .datasets import load_gray
from .errors import FormatError, StereoError
from .pixelio import RunConfig
from .stripes import match_frame_striped

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_PARAM = 0, 1, 2, 3
ALGOS = ("mgm", "mgm-full", "sgm4", "sgm8", "wta")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read_image(path) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    if path.suffix.lower() == ".pgm":
        return pixelio.read_pgm(path)
    return load_gray(path)


def _config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    flags = {
        "window": args.window,
        "disparity_range": args.dmax,
        "p1": args.p1,
        "p2": args.p2,
        "sections": args.sections,
    }
    return RunConfig.from_mapping({k: v for k, v in flags.items() if v is not None}, base=cfg)


def cmd_rectify(args) -> int:
    raw = _read_image(args.raw)
    table = pixelio.read_remap_table(args.map)
    pixelio.write_pgm(rectify.remap(raw, table), args.out)
    return EXIT_OK


def run_algo(algo: str, left, right, cfg: RunConfig, init_value=None):
    if algo == "mgm":
        if cfg.sections == 1:
            return match_frame(left, right, cfg, init_value=init_value)
        return match_frame_striped(left, right, cfg, init_value=init_value)
    if algo == "mgm-full":
        return oracle.mgm_full(left, right, cfg, init_value=init_value)[0]
    if algo in ("sgm4", "sgm8"):
        return oracle.sgm_paths(left, right, cfg, paths=int(algo[-1]))
    return oracle.census_wta(left, right, cfg)


def cmd_match(args) -> int:
    cfg = _config(args)
    left = _read_image(args.left)
    right = _read_image(args.right)
    dmap = run_algo(args.algo, left, right, cfg, args.init_value)
    pixelio.write_disparity(dmap, args.out, args.scale)
    return EXIT_OK


def cmd_eval(args) -> int:
    gt_path, est_path = Path(args.gt), Path(args.est)
    gt = pixelio.decode_ground_truth(_read_image(gt_path), args.gt_scale)
    est = pixelio.decode_ground_truth(_read_image(est_path), args.est_scale)
    report = evalkit.accuracy(est, gt, args.tolerance)
    print(report.as_text())
    if args.report:
        evalkit.write_report(report, args.report, est=est_path, gt=gt_path)
    if args.figures:
        from . import figures

        out = Path(args.figures)
        out.mkdir(parents=True, exist_ok=True)
        figures.plot_comparison(est, gt, report, out / f"{est_path.stem}_vs_gt.png", est_path.stem)
        figures.plot_error_histogram(est, gt, report, out / f"{est_path.stem}_error_hist.png")
    return EXIT_OK


def cmd_depth(args) -> int:
    d = pixelio.decode_ground_truth(_read_image(args.disp), args.scale)
    depth, ok = evalkit.disparity_to_depth(d, args.baseline, args.focal)
    np.save(args.out, np.where(ok, depth, np.nan).astype(np.float32))
    if ok.any():
        print(f"valid={int(ok.sum())} min={depth[ok].min():.3f}m max={depth[ok].max():.3f}m")
    else:
        print("valid=0")
    return EXIT_OK


def synthetic_pair(height: int, width: int, shift: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    right = rng.integers(0, 256, (height, width + shift), dtype=np.uint8)
    left = right[:, :width]
    right = right[:, shift : shift + width]
    return np.ascontiguousarray(left), np.ascontiguousarray(right)


def cmd_bench(args) -> int:
    cfg = RunConfig(disparity_range=args.dmax, sections=args.sections)
    left, right = synthetic_pair(args.height, args.width, min(args.dmax - 1, 8))
    match_frame(left[: cfg.window * 2], right[: cfg.window * 2], cfg)  # JIT warm-up
    single, striped = [], []
    first = None
    for i in range(args.repeat):
        t0 = time.perf_counter()
        d1 = match_frame(left, right, cfg)
        t1 = time.perf_counter()
        dk = match_frame_striped(left, right, cfg)
        t2 = time.perf_counter()
        single.append(t1 - t0)
        striped.append(t2 - t1)
        first = first or (d1, dk)
        if not (d1 == first[0] and dk == first[1]):
            raise StereoError("non-deterministic disparity output")
        print(f"run {i + 1}: sections=1 {1 / single[-1]:.2f} fps  "
              f"sections={cfg.sections} {1 / striped[-1]:.2f} fps")
    print(f"summary: {args.width}x{args.height} D={args.dmax} "
          f"median sections=1 {1 / np.median(single):.2f} fps, "
          f"sections={cfg.sections} {1 / np.median(striped):.2f} fps")
    for blocks in sorted({1, cfg.sections}):
        m = evalkit.TimingModel(clock_hz=args.clock, pipeline_depth=args.pipeline_depth,
                                blocks=blocks, rows=args.height, cols=args.width, D=args.dmax)
        print(f"model: blocks={blocks} clock={args.clock / 1e6:g}MHz "
              f"pipeline_depth={args.pipeline_depth} -> {evalkit.estimate_fps(m):.2f} fps")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ssmgm", description="single-storage MGM stereo toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("rectify", help="apply a Q11.5 remap table to a raw image")
    r.add_argument("--raw", required=True)
    r.add_argument("--map", required=True)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_rectify)

    m = sub.add_parser("match", help="compute a scaled disparity PGM")
    m.add_argument("--left", required=True)
    m.add_argument("--right", required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--algo", choices=ALGOS, default="mgm")
    m.add_argument("--config", help="key=value file preloading run parameters")
    m.add_argument("--sections", type=int)
    m.add_argument("--p1", type=int)
    m.add_argument("--p2", type=int)
    m.add_argument("--dmax", type=int)
    m.add_argument("--window", type=int)
    m.add_argument("--scale", type=int, default=2)
    m.add_argument("--init-value", type=int, help="buffer initialisation (default: cost cap)")
    m.set_defaults(func=cmd_match)

    e = sub.add_parser("eval", help="RMSE and erroneous-pixel percentage against ground truth")
    e.add_argument("--est", required=True)
    e.add_argument("--gt", required=True)
    e.add_argument("--gt-scale", type=int, default=4)
    e.add_argument("--est-scale", type=int, default=2)
    e.add_argument("--tolerance", type=float, default=evalkit.DEFAULT_TOLERANCE)
    e.add_argument("--report", help="write key=value report here")
    e.add_argument("--figures", help="directory for comparison figures")
    e.set_defaults(func=cmd_eval)

    d = sub.add_parser("depth", help="convert a scaled disparity PGM to metric depth (.npy)")
    d.add_argument("--disp", required=True)
    d.add_argument("--scale", type=int, default=2)
    d.add_argument("--baseline", type=float, required=True, help="metres")
    d.add_argument("--focal", type=float, required=True, help="pixels")
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_depth)

    b = sub.add_parser("bench", help="software fps next to the frame-time model")
    b.add_argument("--width", type=int, default=640)
    b.add_argument("--height", type=int, default=480)
    b.add_argument("--dmax", type=int, default=92)
    b.add_argument("--sections", type=int, default=5)
    b.add_argument("--repeat", type=int, default=3)
    b.add_argument("--clock", type=float, default=100e6)
    b.add_argument("--pipeline-depth", type=int, default=evalkit.CALIBRATED_PIPELINE_DEPTH)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (OSError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except StereoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
