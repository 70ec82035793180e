"""How the strategy gap moves with clutter density.

Sweeps the object radius at fixed N and workspace, reporting occupied area
fraction, success rates, mean k over commonly solved instances and how often
the slot-acquisition branch fired.
"""

import argparse
import math

from clutterplan.harness import BenchConfig, run_bench, summarize


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=15)
    ap.add_argument("--radii", type=float, nargs="+", default=[3.5, 4.0, 4.5, 5.0, 5.5])
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--baseline-pool", default="reachable")
    args = ap.parse_args()

    print(f"{'r':>4} {'density':>7} | {'success P/D/F':>16} | {'k common P/D/F':>20} | {'non-mono P':>10}")
    for r in args.radii:
        cfg = BenchConfig(n_values=[args.n], instances=args.instances, radius=r, require_blocked=True,
                          baseline_pool=args.baseline_pool)
        rows = run_bench(cfg)
        s = summarize(rows)[str(args.n)]
        density = (args.n + 1) * math.pi * r * r / (cfg.width * cfg.depth)
        order = ("proposed", "deepest", "farthest")
        rates = "/".join(f"{s[k]['success_rate']:.2f}" for k in order)
        ks = "/".join("-" if s[k]["common"]["k_mean"] is None else f"{s[k]['common']['k_mean']:.2f}" for k in order)
        nonmono = s["proposed"]["successes"] - s["proposed"]["monotone_successes"]
        print(f"{r:>4.1f} {density:>7.2f} | {rates:>16} | {ks:>20} | {nonmono:>10}")


if __name__ == "__main__":
    main()
