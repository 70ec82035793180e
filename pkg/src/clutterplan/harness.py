"""Random instances, benchmark sweeps and metric tables."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from clutterplan.accessibility import DEFAULT_REACH, ReachParams, is_accessible
from clutterplan.geometry import EPS_GEOM, Role, Scene, SceneObject, Workspace
from clutterplan.planner import DEFAULT_BUDGET_S, BaselinePool, PlanTrace, Strategy, plan_rearrangement
from clutterplan.slots import DEFAULT_TRIALS, sample_candidate_slots

log = logging.getLogger(__name__)

CSV_HEADER = ("N", "strategy", "seed", "outcome", "k", "plan_time_ms", "corridor_tests", "monotone")
MAX_PLACEMENT_ATTEMPTS = 10_000
MAX_DENSITY = 0.7
OUT_DIR_ENV = "CLUTTERPLAN_OUT"


class InstanceError(ValueError):
    """Requested instance cannot be generated."""


@dataclass(frozen=True)
class InstanceParams:
    n: int = 15
    width: float = 90.0
    depth: float = 45.0
    height: float = 45.0
    radius: float = 3.5
    seed: int = 0
    trials: int = DEFAULT_TRIALS
    require_blocked: bool = False

    @classmethod
    def large_space(cls, **kw) -> InstanceParams:
        return cls(width=120.0, depth=75.0, **kw)

    @property
    def workspace(self) -> Workspace:
        return Workspace(self.width, self.depth, self.height)


def _place_discs(params: InstanceParams, rng: np.random.Generator) -> list[tuple[float, float]]:
    r = params.radius
    placed: list[tuple[float, float]] = []
    attempts = 0
    while len(placed) < params.n + 1:
        if attempts >= MAX_PLACEMENT_ATTEMPTS:
            raise InstanceError(
                f"could not place {params.n + 1} discs of radius {r} in {MAX_PLACEMENT_ATTEMPTS} attempts"
            )
        attempts += 1
        x = rng.uniform(r, params.width - r)
        y = rng.uniform(r, params.depth - r)
        if all(math.hypot(x - px, y - py) >= 2 * r - EPS_GEOM for px, py in placed):
            placed.append((float(x), float(y)))
    return placed


def generate_instance(params: InstanceParams, reach: ReachParams = DEFAULT_REACH) -> Scene:
    """Random scene: target first, then ``n`` obstacles, uniform and non-overlapping.

    Candidate slots are sampled from the same seeded stream so a seed pins
    the whole instance. With ``require_blocked`` the draw is repeated (same
    stream) until the target starts out unreachable.
    """
    if params.n < 1:
        raise InstanceError("need at least one obstacle")
    if params.radius <= 0:
        raise InstanceError("radius must be positive")
    ws = params.workspace
    if (params.n + 1) * math.pi * params.radius**2 >= MAX_DENSITY * ws.area:
        raise InstanceError(
            f"{params.n + 1} discs of radius {params.radius} exceed {MAX_DENSITY:.0%} of a "
            f"{ws.width}x{ws.depth} workspace"
        )
    rng = np.random.default_rng(params.seed)
    for _ in range(MAX_PLACEMENT_ATTEMPTS):
        centres = _place_discs(params, rng)
        objects = [SceneObject("ot", *centres[0], params.radius, Role.TARGET)]
        objects += [SceneObject(f"o{i:02d}", x, y, params.radius) for i, (x, y) in enumerate(centres[1:], 1)]
        scene = Scene(ws, objects, (), params.seed)
        if not params.require_blocked or not is_accessible(scene.target, scene, {"ot"}, reach):
            break
    else:
        raise InstanceError("no instance with a blocked target found")
    slots = sample_candidate_slots(scene, params.radius, params.trials, rng)
    return scene.with_slots(slots)


@dataclass
class BenchConfig:
    n_values: list[int] = field(default_factory=lambda: [9, 11, 13, 15])
    instances: int = 20
    strategies: list[str] = field(default_factory=lambda: [s.value for s in Strategy])
    time_budget_s: float = DEFAULT_BUDGET_S
    out_dir: str | None = None
    seed0: int = 0
    width: float = 90.0
    depth: float = 45.0
    radius: float = 3.5
    trials: int = DEFAULT_TRIALS
    bins: int = DEFAULT_REACH.bins
    clearance: float = DEFAULT_REACH.clearance
    require_blocked: bool = False
    baseline_pool: str = BaselinePool.REACHABLE.value
    workers: int = 1

    def __post_init__(self):
        if self.instances < 1:
            raise ValueError("instances per N must be >= 1")
        if any(n < 1 for n in self.n_values):
            raise ValueError("every N must be >= 1")
        for s in self.strategies:
            Strategy(s)
        BaselinePool(self.baseline_pool)

    @classmethod
    def from_dict(cls, doc: dict) -> BenchConfig:
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown bench config keys: {sorted(unknown)}")
        return cls(**doc)

    @classmethod
    def load(cls, path) -> BenchConfig:
        doc = json.loads(Path(path).read_text())
        if not isinstance(doc, dict):
            raise ValueError(f"{path}: bench config must be a JSON object")
        return cls.from_dict(doc)

    def seeds(self) -> range:
        return range(self.seed0, self.seed0 + self.instances)

    def params(self, n: int, seed: int) -> InstanceParams:
        return InstanceParams(
            n=n,
            width=self.width,
            depth=self.depth,
            radius=self.radius,
            seed=seed,
            trials=self.trials,
            require_blocked=self.require_blocked,
        )

    @property
    def reach(self) -> ReachParams:
        return ReachParams(self.bins, self.clearance)


@dataclass(frozen=True)
class MetricsRow:
    N: int
    strategy: str
    seed: int
    outcome: str
    k: int
    plan_time_ms: float
    corridor_tests: int
    monotone: bool

    @property
    def success(self) -> bool:
        return self.outcome == "success"

    def csv_fields(self) -> list:
        return [self.N, self.strategy, self.seed, self.outcome, self.k, f"{self.plan_time_ms:.3f}",
                self.corridor_tests, str(self.monotone).lower()]


def row_from_trace(n: int, seed: int, trace: PlanTrace) -> MetricsRow:
    outcome = "success" if trace.success else f"fail:{trace.reason.value}"
    return MetricsRow(n, trace.strategy.value, seed, outcome, trace.k, trace.plan_time_ms,
                      trace.counters.corridor_tests, trace.monotone)


def _run_cell(args) -> list[MetricsRow]:
    config, n, seed = args
    try:
        scene = generate_instance(config.params(n, seed), config.reach)
    except InstanceError as exc:
        log.warning("N=%d seed=%d: %s", n, seed, exc)
        return [MetricsRow(n, s, seed, "fail:instance-generation", 0, 0.0, 0, True) for s in config.strategies]
    rows = []
    for s in config.strategies:
        trace = plan_rearrangement(
            scene, Strategy(s), config.time_budget_s, config.reach, config.trials, BaselinePool(config.baseline_pool)
        )
        rows.append(row_from_trace(n, seed, trace))
    return rows


def run_bench(config: BenchConfig) -> list[MetricsRow]:
    """Run every strategy on every (N, seed) instance; failures are recorded, never raised.

    When ``config.out_dir`` is set, ``metrics.csv`` and ``summary.json`` are
    written there.
    """
    if not config.strategies:
        rows: list[MetricsRow] = []
    else:
        cells = [(config, n, seed) for n in config.n_values for seed in config.seeds()]
        if config.workers > 1:
            with ProcessPoolExecutor(config.workers) as pool:
                chunks = list(pool.map(_run_cell, cells))
        else:
            chunks = [_run_cell(c) for c in cells]
        rows = [r for chunk in chunks for r in chunk]
    if config.out_dir:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "metrics.csv").write_text(rows_to_csv(rows))
        (out / "summary.json").write_text(json.dumps(summarize(rows), indent=2))
    return rows


def rows_to_csv(rows: Sequence[MetricsRow], with_time: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        fields = r.csv_fields()
        if not with_time:
            fields[5] = ""
        w.writerow(fields)
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def _mean_std(xs: Sequence[float]) -> tuple[float | None, float | None]:
    if not xs:
        return None, None
    return statistics.fmean(xs), (statistics.stdev(xs) if len(xs) > 1 else 0.0)


def summarize(rows: Sequence[MetricsRow]) -> dict:
    """Per N and strategy: success rate plus k and time statistics.

    ``conditioned`` averages over the strategy's own successes, ``all`` over
    every run, and ``common`` over the instances every strategy solved.
    """
    by_cell: dict[tuple[int, str], list[MetricsRow]] = {}
    for r in rows:
        by_cell.setdefault((r.N, r.strategy), []).append(r)
    solved_by: dict[int, dict[int, set[str]]] = {}
    strategies_at: dict[int, set[str]] = {}
    for r in rows:
        strategies_at.setdefault(r.N, set()).add(r.strategy)
        if r.success:
            solved_by.setdefault(r.N, {}).setdefault(r.seed, set()).add(r.strategy)
    out: dict = {}
    for (n, strat), cell in sorted(by_cell.items()):
        wins = [r for r in cell if r.success]
        common_seeds = {seed for seed, s in solved_by.get(n, {}).items() if s == strategies_at[n]}
        common = [r for r in wins if r.seed in common_seeds]
        entry = {"runs": len(cell), "successes": len(wins), "success_rate": len(wins) / len(cell)}
        for label, subset in (("conditioned", wins), ("all", cell), ("common", common)):
            k_mean, k_std = _mean_std([r.k for r in subset])
            t_mean, t_std = _mean_std([r.plan_time_ms for r in subset])
            entry[label] = {"n": len(subset), "k_mean": k_mean, "k_std": k_std,
                            "time_ms_mean": t_mean, "time_ms_std": t_std}
        entry["monotone_successes"] = sum(r.monotone for r in wins)
        out.setdefault(str(n), {})[strat] = entry
    return out


def default_out_dir() -> str:
    return os.environ.get(OUT_DIR_ENV, "clutterplan-out")


def config_to_dict(config: BenchConfig) -> dict:
    return asdict(config)


__all__ = [
    "BenchConfig",
    "CSV_HEADER",
    "InstanceError",
    "InstanceParams",
    "MetricsRow",
    "generate_instance",
    "read_csv",
    "rows_to_csv",
    "run_bench",
    "summarize",
]
