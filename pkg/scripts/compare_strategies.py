"""Mean actions and success rate per strategy over an N sweep.

    python scripts/compare_strategies.py --n 9 11 13 15 --instances 20 --require-blocked
"""

import argparse
import json

from clutterplan.harness import BenchConfig, run_bench, summarize
from clutterplan.planner import BaselinePool


def fmt(x, spec=".2f"):
    return "-" if x is None else format(x, spec)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[9, 11, 13, 15])
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--radius", type=float, default=3.5)
    ap.add_argument("--width", type=float, default=90.0)
    ap.add_argument("--depth", type=float, default=45.0)
    ap.add_argument("--seed0", type=int, default=0)
    ap.add_argument("--require-blocked", action="store_true")
    ap.add_argument("--baseline-pool", choices=[b.value for b in BaselinePool], default="reachable")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", help="directory for metrics.csv / summary.json")
    ap.add_argument("--json", action="store_true", help="print the raw summary")
    args = ap.parse_args()

    config = BenchConfig(
        n_values=args.n, instances=args.instances, radius=args.radius, width=args.width, depth=args.depth,
        seed0=args.seed0, require_blocked=args.require_blocked, baseline_pool=args.baseline_pool,
        workers=args.workers, out_dir=args.out,
    )
    summary = summarize(run_bench(config))
    if args.json:
        print(json.dumps(summary, indent=2))
        return
    print(f"{'N':>3} {'strategy':<9} {'success':>7} {'k(all ok)':>10} {'k(common)':>10} {'sd':>5} {'ms':>8} {'mono':>5}")
    for n, cells in summary.items():
        for strat, e in cells.items():
            c = e["common"]
            print(f"{n:>3} {strat:<9} {e['success_rate']:>7.2f} {fmt(e['conditioned']['k_mean']):>10} "
                  f"{fmt(c['k_mean']):>10} {fmt(c['k_std']):>5} {fmt(e['conditioned']['time_ms_mean'], '.1f'):>8} "
                  f"{e['monotone_successes']:>5}")


if __name__ == "__main__":
    main()
