"""Plan every hand-built demo scene and write step-by-step SVGs."""

import argparse
from pathlib import Path

from clutterplan.demo_scenes import SCENES
from clutterplan.harness import default_out_dir
from clutterplan.planner import plan_rearrangement
from clutterplan.render import render_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(default_out_dir()) / "demos"))
    args = ap.parse_args()
    for name, build in SCENES.items():
        scene = build()
        trace = plan_rearrangement(scene)
        files = render_svg(scene, Path(args.out) / name, trace)
        status = "success" if trace.success else f"fail ({trace.reason.value})"
        print(f"{name:<15} {status:<28} k={trace.k}  {len(files)} svg -> {Path(args.out) / name}")


if __name__ == "__main__":
    main()
