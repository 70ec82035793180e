"""Command line entry point: gen, plan, bench, render.

Exit codes: 0 success, 1 planning failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from clutterplan.accessibility import DEFAULT_BINS, ReachParams, build_histogram
from clutterplan.demo_scenes import SCENES
from clutterplan.geometry import Scene
from clutterplan.harness import (
    BenchConfig,
    InstanceError,
    OUT_DIR_ENV,
    InstanceParams,
    config_to_dict,
    default_out_dir,
    generate_instance,
    run_bench,
)
from clutterplan.planner import DEFAULT_BUDGET_S, BaselinePool, PlanTrace, Strategy, plan_rearrangement, validate_plan
from clutterplan.render import render_svg
from clutterplan.slots import DEFAULT_TRIALS

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("clutterplan")


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from exc


def _load_scene(path: str) -> Scene:
    try:
        return Scene.from_dict(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a valid scene ({exc})") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text if text.endswith("\n") else text + "\n")


def _reach(args) -> ReachParams:
    return ReachParams(args.bins, args.clearance)


def cmd_gen(args) -> int:
    if args.demo:
        scene = SCENES[args.demo]()
    else:
        params = InstanceParams(
            n=args.n,
            width=args.width,
            depth=args.depth,
            height=args.height,
            radius=args.radius,
            seed=args.seed,
            trials=args.trials,
            require_blocked=args.require_blocked,
        )
        scene = generate_instance(params)
    _emit(scene.to_json(indent=2), args.output)
    return EXIT_OK


def cmd_plan(args) -> int:
    scene = _load_scene(args.scene)
    scene.target  # noqa: B018  (raises on a scene without exactly one target)
    reach = _reach(args)
    trace = plan_rearrangement(scene, args.strategy, args.budget_s, reach, args.trials, args.baseline_pool)
    doc = trace.to_dict()
    if args.validate and trace.success:
        check = validate_plan(scene, trace, reach, args.trials)
        doc["validation"] = {"ok": check.ok, "step": check.step, "reason": check.reason}
    _emit(json.dumps(doc, indent=2), args.output)
    if not trace.success:
        print(f"plan failed: {trace.reason.value} {trace.detail}".rstrip(), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_bench(args) -> int:
    doc = _read_json(args.config)
    if not isinstance(doc, dict):
        raise InputError(f"{args.config}: bench config must be a JSON object")
    if args.out_dir:
        doc["out_dir"] = args.out_dir
    doc.setdefault("out_dir", None)
    if not doc["out_dir"]:
        doc["out_dir"] = default_out_dir()
    if args.workers is not None:
        doc["workers"] = args.workers
    try:
        config = BenchConfig.from_dict(doc)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{args.config}: {exc}") from exc
    rows = run_bench(config)
    out = Path(config.out_dir)
    (out / "config.json").write_text(json.dumps(config_to_dict(config), indent=2) + "\n")
    print(f"{len(rows)} rows -> {out / 'metrics.csv'}", file=sys.stderr)
    return EXIT_OK


def cmd_render(args) -> int:
    scene = _load_scene(args.scene)
    reach = _reach(args)
    out = args.output or str(Path(default_out_dir()) / ("steps" if args.trace else "scene.svg"))
    if args.histogram:
        try:
            subject = scene.object(args.histogram)
        except KeyError as exc:
            raise InputError(f"no object {args.histogram!r} in {args.scene}") from exc
        hist = build_histogram(subject, scene, {subject.id}, reach.bins, reach.clearance)
        _emit(json.dumps(hist.to_dict(), indent=2), out)
        return EXIT_OK
    trace = None
    if args.trace:
        try:
            trace = PlanTrace.from_dict(_read_json(args.trace))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{args.trace}: not a valid trace ({exc})") from exc
    for p in render_svg(scene, out, trace, reach):
        print(p)
    return EXIT_OK


def _add_reach_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bins", type=int, default=DEFAULT_BINS, help="approach directions per fan")
    p.add_argument("--clearance", type=float, default=0.0, help="extra corridor half-width in cm")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clutterplan", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="emit a scene as JSON")
    g.add_argument("--n", type=int, default=15, help="number of obstacles")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--radius", type=float, default=3.5)
    g.add_argument("--width", type=float, default=90.0)
    g.add_argument("--depth", type=float, default=45.0)
    g.add_argument("--height", type=float, default=45.0)
    g.add_argument("--large", action="store_true", help="use the 120 x 75 cm workspace")
    g.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    g.add_argument("--require-blocked", action="store_true", help="redraw until the target is blocked")
    g.add_argument("--demo", choices=sorted(SCENES), help="emit a hand-built scene instead")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("plan", help="plan a scene (JSON in, trace JSON out)")
    p.add_argument("scene", help="scene JSON file, or - for stdin")
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.PROPOSED.value)
    p.add_argument("--budget-s", type=float, default=DEFAULT_BUDGET_S)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--baseline-pool", choices=[b.value for b in BaselinePool], default=BaselinePool.REACHABLE.value)
    p.add_argument("--validate", action="store_true", help="replay and check a successful plan")
    _add_reach_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_plan)

    b = sub.add_parser("bench", help="run a benchmark sweep from a JSON config")
    b.add_argument("config")
    b.add_argument("--out-dir", help=f"overrides the config; default from ${OUT_DIR_ENV}")
    b.add_argument("--workers", type=int)
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("render", help="write SVG snapshots of a scene or a plan")
    r.add_argument("scene")
    r.add_argument("--trace", help="trace JSON; one SVG per step into the output directory")
    r.add_argument("--histogram", metavar="OBJECT", help="dump the direction histogram of OBJECT as JSON")
    _add_reach_flags(r)
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "large", False):
        args.width, args.depth = 120.0, 75.0
    try:
        return args.func(args)
    except (InputError, InstanceError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
