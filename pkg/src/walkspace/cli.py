"""Command-line interface: analyze, route, gen, eval, bench."""

import argparse
import json
import os
import sys

from .errors import InvalidEndpointError, WalkspaceError
from .mesh import parse_obj, write_obj


def _fail(stage, exc):
    print(f"walkspace: {stage}: {exc}", file=sys.stderr)
    return 1


def _set_threads(n):
    """Cap worker count; clamped to what the runtime actually has."""
    if n is None:
        return
    if int(n) < 1:
        raise WalkspaceError("--threads must be >= 1")
    from ._kernels import backend_name
    if backend_name() == "numba":
        import numba
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def cmd_analyze(args):
    from .config import load_config
    from .pipeline import run_analysis
    from .report import write_outputs
    try:
        cfg = load_config(args.config, preset_override=args.preset)
    except WalkspaceError as exc:
        return _fail("config", exc)
    try:
        _set_threads(args.threads)
        mesh = parse_obj(args.input)
    except (WalkspaceError, OSError) as exc:
        return _fail("parse", exc)
    try:
        result = run_analysis(mesh, cfg)
    except WalkspaceError as exc:
        return _fail("analysis", exc)
    try:
        write_outputs(args.out, mesh, result.labels, result.colored,
                      result.grid, result.loops, result.floor_est,
                      result.report)
    except OSError as exc:
        return _fail("write", exc)
    for w in result.warnings:
        print(f"warning: {w}")
    stages = " ".join(f"{k}={v:.2f}s" for k, v in result.timings.items())
    print(f"stages: {stages}")
    print(f"compliance ratio: {result.report['compliance_ratio']:.3f}")
    print(f"analysis written to {args.out}")
    return 0


def cmd_route(args):
    from .clearance import check_route
    from .report import read_grid_csv
    report_path = os.path.join(args.analysis, "report.json")
    try:
        with open(report_path, "r", encoding="utf-8") as fh:
            report = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail("route", f"cannot load {report_path}: {exc}")
    meta = report.get("grid")
    if not meta:
        return _fail("route", "analysis found no floor, so there is no grid")
    try:
        grid = read_grid_csv(os.path.join(args.analysis, "grid.csv"), meta)
    except (OSError, ValueError, KeyError) as exc:
        return _fail("route", f"cannot load grid.csv: {exc}")
    try:
        result = check_route(grid, (args.start_x, args.start_y),
                             (args.goal_x, args.goal_y))
    except InvalidEndpointError as exc:
        return _fail("route", exc)
    if result.exists:
        print("route: found")
        print(f"length: {result.length:.3f} m")
        print(f"limiting clearance: {result.limiting_clearance:.3f} m")
        return 0
    print("route: none")
    return 2


def cmd_gen(args):
    from .config import load_scene_spec
    from .scenegen import generate_scene
    try:
        spec = load_scene_spec(args.spec)
        mesh, truth = generate_scene(spec, seed=args.seed)
    except WalkspaceError as exc:
        return _fail("gen", exc)
    try:
        os.makedirs(args.out, exist_ok=True)
        write_obj(mesh, os.path.join(args.out, "scene.obj"))
        with open(os.path.join(args.out, "truth.json"), "w", encoding="utf-8") as fh:
            fh.write(truth.to_json() + "\n")
    except OSError as exc:
        return _fail("write", exc)
    print(f"scene: {mesh.n_vertices} vertices, {mesh.n_faces} faces -> {args.out}")
    return 0


def cmd_eval(args):
    from .classify import CLASS_NAMES
    from .report import read_grid_csv, read_labels_csv
    from .scenegen import GroundTruth, evaluate_labels
    try:
        codes = read_labels_csv(os.path.join(args.analysis, "labels.csv"))
        with open(args.truth, "r", encoding="utf-8") as fh:
            truth = GroundTruth.from_json(fh.read())
        report_path = os.path.join(args.analysis, "report.json")
        with open(report_path, "r", encoding="utf-8") as fh:
            meta = json.load(fh).get("grid")
        grid = None
        grid_csv = os.path.join(args.analysis, "grid.csv")
        if meta and os.path.exists(grid_csv):
            grid = read_grid_csv(grid_csv, meta)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        return _fail("eval", exc)
    try:
        metrics = evaluate_labels(codes, truth, grid)
    except WalkspaceError as exc:
        return _fail("eval", exc)
    print(f"{'class':<16} {'precision':>9} {'recall':>9} {'support':>8} {'predicted':>9}")
    for name in CLASS_NAMES:
        m = metrics["classes"][name]
        print(f"{name:<16} {m['precision']:>9.3f} {m['recall']:>9.3f} "
              f"{m['support']:>8d} {m['predicted']:>9d}")
    if "green_iou" in metrics:
        print(f"green IoU: {metrics['green_iou']:.4f}")
    return 0


def cmd_bench(args):
    from .bench import format_table, run_bench
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        return _fail("bench", f"--sizes must be integers, got {args.sizes!r}")
    backends = [b.strip() for b in args.backends.split(",") if b.strip()]
    try:
        _set_threads(args.threads)
        rows = run_bench(sizes, backends, seed=args.seed)
    except WalkspaceError as exc:
        return _fail("bench", exc)
    print(format_table(rows))
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="walkspace",
        description="Walkable-space analysis of indoor triangle meshes",
    )
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the full pipeline on an OBJ mesh")
    a.add_argument("input", help="triangle mesh (Wavefront OBJ)")
    a.add_argument("--config", default=None, help="INI parameter file")
    a.add_argument("--preset", choices=("osha", "ada"), default=None,
                   help="clearance standard (overrides the config preset)")
    a.add_argument("--out", default="walkspace_out", help="output directory")
    a.add_argument("--threads", type=int, default=None, help="worker cap")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("route", help="compliant path query on a finished analysis")
    r.add_argument("analysis", help="directory written by analyze")
    r.add_argument("start_x", type=float)
    r.add_argument("start_y", type=float)
    r.add_argument("goal_x", type=float)
    r.add_argument("goal_y", type=float)
    r.set_defaults(func=cmd_route)

    g = sub.add_parser("gen", help="generate a synthetic scene with ground truth")
    g.add_argument("spec", help="scene description INI")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="scene_out", help="output directory")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("eval", help="score an analysis against ground truth")
    e.add_argument("analysis", help="directory written by analyze")
    e.add_argument("truth", help="truth.json written by gen")
    e.set_defaults(func=cmd_eval)

    b = sub.add_parser("bench", help="per-stage timings, compiled vs numpy kernels")
    b.add_argument("--sizes", default="50000,200000,500000",
                   help="comma-separated face counts")
    b.add_argument("--backends", default="numba,numpy")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--threads", type=int, default=None)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
