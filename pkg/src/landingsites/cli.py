"""Command-line interface: ``landingsites {detect,baseline,synth,eval,slope,render}``."""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .ascii_grid import read_asc, save_asc
from .evaluation import evaluate, timed_run, with_timing
from .exceptions import GridMismatch, RasterError
from .grid import BitMask, check_aligned
from .pipeline import DetectionParams, LandingMap, detect
from .quadtree import BaselineParams, baseline_detect, sweep_var_thresh
from .render import write_ppm
from .synthetic import SynthParams, generate
from .terrain import slope_degrees
from .validation import min_pixels_for_area


class StageError(Exception):
    """Failure tagged with the pipeline stage it happened in."""

    def __init__(self, stage, message):
        super().__init__(f"{stage} error: {message}")
        self.stage = stage


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _float_pair(text):
    values = _float_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected MIN,MAX, got {text!r}")
    return tuple(values)


def _echo(args):
    items = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    print("config: " + " ".join(f"{k}={v}" for k, v in items.items()), file=sys.stderr)


def _check_inputs(*paths):
    for p in paths:
        if p is not None and not os.path.isfile(p):
            raise StageError("parse", f"input file not found: {p}")


def _check_outputs(*paths):
    for p in paths:
        if p is None:
            continue
        parent = os.path.dirname(os.path.abspath(p))
        if not os.path.isdir(parent):
            raise StageError("write", f"output directory does not exist: {parent}")


def _read(path):
    try:
        return read_asc(path)
    except (RasterError, OSError, UnicodeDecodeError) as exc:
        raise StageError("parse", f"{path}: {exc}") from exc


def _align(*grids, what):
    try:
        check_aligned(*(g.header for g in grids), what=what)
    except GridMismatch as exc:
        raise StageError("align", f"inputs do not align: {exc}") from exc


def _write(grid, path):
    try:
        save_asc(grid, path)
    except OSError as exc:
        raise StageError("write", f"{path}: {exc}") from exc


def _compute(fn, *args):
    try:
        return timed_run(fn, *args)
    except RasterError as exc:
        raise StageError("compute", str(exc)) from exc


def cmd_detect(args):
    _check_inputs(args.dsm, args.dtm, args.gt)
    _check_outputs(args.out, args.render)
    try:
        params = DetectionParams(args.slope_thresh, args.height_thresh, args.min_area,
                                 args.strict_area)
    except RasterError as exc:
        raise StageError("compute", str(exc)) from exc
    dsm, dtm = _read(args.dsm), _read(args.dtm)
    _align(dsm, dtm, what="DSM and DTM")
    min_pixels = min_pixels_for_area(params.min_area, dsm.cellsize)
    print(f"min_pixels={min_pixels} (min_area={params.min_area} m2, cellsize={dsm.cellsize} m)",
          file=sys.stderr)
    landing_map, seconds = _compute(detect, dsm, dtm, params)
    _write(landing_map.to_grid(), args.out)
    if args.render:
        write_ppm(landing_map, args.render)
    print(f"detect seconds={seconds:.6g}")
    if args.gt:
        _report(landing_map, args.gt, seconds, params.describe())
    return 0


def _report(landing_map, gt_path, seconds, echo):
    gt = BitMask.from_grid(_read(gt_path))
    if gt.header != landing_map.header:
        raise StageError("align", "prediction and ground truth do not align")
    report = with_timing(evaluate(landing_map, gt), seconds, echo)
    print(report.summary())
    print(report.record())
    return report


def cmd_baseline(args):
    if args.var_sweep is not None and args.gt is None:
        raise StageError("compute", "--var-sweep requires --gt")
    _check_inputs(args.dsm, args.gt)
    _check_outputs(args.out, args.render)
    try:
        params = BaselineParams(args.var_thresh, args.height_tol, args.min_leaf, args.min_area)
    except RasterError as exc:
        raise StageError("compute", str(exc)) from exc
    dem = _read(args.dsm)
    if args.var_sweep is not None:
        gt = BitMask.from_grid(_read(args.gt))
        _align(dem, gt, what="DSM and ground truth")
        (best, results), _ = _compute(sweep_var_thresh, dem, gt, args.var_sweep, params)
        for v, rep in results:
            print(f"sweep var_thresh={v:g} {rep.record()}", file=sys.stderr)
        print(f"selected var_thresh={best:g}")
        params = BaselineParams(best, args.height_tol, args.min_leaf, args.min_area)
    landing_map, seconds = _compute(baseline_detect, dem, params)
    _write(landing_map.to_grid(), args.out)
    if args.render:
        write_ppm(landing_map, args.render)
    print(f"baseline seconds={seconds:.6g}")
    if args.gt:
        echo = (f"var_thresh={params.var_thresh} height_tol={params.height_tol} "
                f"min_leaf={params.min_leaf} min_area={params.min_area}")
        _report(landing_map, args.gt, seconds, echo)
    return 0


def cmd_synth(args):
    paths = [f"{args.out_prefix}_{kind}.asc" for kind in ("dtm", "dsm", "gt")]
    _check_outputs(*paths)
    try:
        params = SynthParams(
            seed=args.seed, size=args.size, cellsize=args.cellsize,
            relief_amplitude=args.relief, roughness=args.roughness,
            vegetation_density=args.veg_density, vegetation_height_range=args.veg_height,
            gt_slope_thresh=args.gt_slope, gt_min_area=args.gt_min_area)
    except RasterError as exc:
        raise StageError("compute", str(exc)) from exc
    result, seconds = _compute(generate, params)
    for grid, path in zip((result.dtm, result.dsm, result.gt.to_grid()), paths):
        _write(grid, path)
    print(f"synth seconds={seconds:.6g} gt_pixels={result.gt.count()} "
          f"outputs={','.join(paths)}")
    return 0


def cmd_eval(args):
    _check_inputs(args.pred, args.gt)
    pred_grid = _read(args.pred)
    try:
        pred = LandingMap.from_grid(pred_grid)
    except RasterError as exc:
        raise StageError("parse", f"{args.pred}: {exc}") from exc
    _report(pred, args.gt, 0.0, "")
    return 0


def cmd_slope(args):
    _check_inputs(args.dem)
    _check_outputs(args.out)
    dem = _read(args.dem)
    slope, seconds = _compute(slope_degrees, dem)
    _write(slope.to_grid(), args.out)
    print(f"slope seconds={seconds:.6g}")
    return 0


def cmd_render(args):
    _check_inputs(args.map)
    _check_outputs(args.out)
    grid = _read(args.map)
    try:
        landing_map = LandingMap.from_grid(grid)
    except RasterError as exc:
        raise StageError("parse", f"{args.map}: {exc}") from exc
    try:
        write_ppm(landing_map, args.out)
    except OSError as exc:
        raise StageError("write", f"{args.out}: {exc}") from exc
    return 0


def build_parser():
    parser = _Parser(prog="landingsites",
                     description="Detect UAV landing sites from DSM/DTM rasters.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("detect", help="slope/obstacle landing-site detection")
    p.add_argument("--dsm", required=True)
    p.add_argument("--dtm", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--slope-thresh", type=float, default=5.0)
    p.add_argument("--height-thresh", type=float, default=0.5)
    p.add_argument("--min-area", type=float, default=25.0)
    p.add_argument("--no-strict-area", dest="strict_area", action="store_false")
    p.add_argument("--render", metavar="PATH.ppm")
    p.add_argument("--gt", help="score the result against a 0/1 ground-truth grid")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("baseline", help="quadtree height-variance baseline")
    p.add_argument("--dsm", required=True)
    p.add_argument("--out", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--var-thresh", type=float, default=1.0)
    group.add_argument("--var-sweep", type=_float_list, metavar="V1,V2,...")
    p.add_argument("--height-tol", type=float, default=1.0)
    p.add_argument("--min-leaf", type=int, default=4)
    p.add_argument("--min-area", type=float, default=25.0)
    p.add_argument("--gt")
    p.add_argument("--render", metavar="PATH.ppm")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("synth", help="generate a synthetic DTM/DSM/ground-truth triple")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--cellsize", type=float, default=1.2)
    p.add_argument("--relief", type=float, default=80.0)
    p.add_argument("--roughness", type=float, default=0.55)
    p.add_argument("--veg-density", type=float, default=0.1)
    p.add_argument("--veg-height", type=_float_pair, default=(2.0, 15.0), metavar="MIN,MAX")
    p.add_argument("--gt-slope", type=float, default=5.0)
    p.add_argument("--gt-min-area", type=float, default=25.0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval", help="precision/recall of a landing map")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("slope", help="export slope in degrees")
    p.add_argument("--dem", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_slope)

    p = sub.add_parser("render", help="render a landing map as binary PPM")
    p.add_argument("--map", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    _echo(args)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"landingsites {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
