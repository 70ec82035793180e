"""Planning time and corridor-test counts on the large workspace.

Prints, per N, the success rate, worst planning time and the worst ratio
corridor_tests / (N * M^2 * K) with M the initial slot count.
"""

import argparse
import time

from clutterplan.accessibility import DEFAULT_BINS
from clutterplan.harness import InstanceParams, generate_instance
from clutterplan.planner import plan_rearrangement


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[15, 20, 25, 30, 35])
    ap.add_argument("--instances", type=int, default=10)
    ap.add_argument("--radius", type=float, default=3.5)
    ap.add_argument("--any-target", action="store_true", help="keep instances whose target starts reachable")
    args = ap.parse_args()

    print(f"{'N':>3} {'success':>7} {'M mean':>7} {'k mean':>7} {'max s':>7} {'max ratio':>10}")
    for n in args.n:
        ok = 0
        ms, ks, times, ratios = [], [], [], []
        for seed in range(args.instances):
            scene = generate_instance(
                InstanceParams.large_space(n=n, seed=seed, radius=args.radius, require_blocked=not args.any_target)
            )
            m = len(scene.slots)
            t0 = time.perf_counter()
            trace = plan_rearrangement(scene)
            times.append(time.perf_counter() - t0)
            ok += trace.success
            ms.append(m)
            ks.append(trace.k)
            ratios.append(trace.counters.corridor_tests / (n * m * m * DEFAULT_BINS))
        print(f"{n:>3} {ok / args.instances:>7.2f} {sum(ms) / len(ms):>7.1f} {sum(ks) / len(ks):>7.2f} "
              f"{max(times):>7.3f} {max(ratios):>10.4f}")


if __name__ == "__main__":
    main()
