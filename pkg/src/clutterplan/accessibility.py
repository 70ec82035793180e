"""Directional reachability for a disc carried (or approached) by the end-effector.

For a subject disc we look at a fan of straight approach directions, all of
which leave the workspace through the open edge. Each direction is a capsule
(see :class:`~clutterplan.geometry.Corridor`); a direction is free when the
capsule touches neither a wall nor any non-ignored object. The subject is
accessible when at least one direction is free.

The fan spans the directions whose capsule clears both side walls all the
way to the open edge, split into ``bins`` equal angular bins that are probed
at their centres.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from clutterplan.counters import tally
from clutterplan.geometry import (
    EPS_GEOM,
    Corridor,
    Scene,
    corridor_wall_clear,
    direction_vector,
    segment_point_distance,
)

DEFAULT_BINS = 180
WALL = "#wall"  # pseudo-blocker for directions a wall closes off


@dataclass(frozen=True)
class ReachParams:
    """Resolution and safety margin of the direction histogram."""

    bins: int = DEFAULT_BINS
    clearance: float = 0.0

    def __post_init__(self):
        if self.bins < 2:
            raise ValueError(f"need at least 2 direction bins, got {self.bins}")
        if self.clearance < 0:
            raise ValueError("clearance must be non-negative")


DEFAULT_REACH = ReachParams()


@dataclass(frozen=True)
class Fan:
    """Probe corridors for one subject: bin-centre angles plus capsule spines."""

    theta: np.ndarray
    ox: float
    oy: float
    ux: np.ndarray
    uy: np.ndarray
    length: np.ndarray
    radius: float
    wall_ok: np.ndarray

    def distances(self, px, py) -> np.ndarray:
        """``(bins, len(px))`` spine-to-point distances."""
        return segment_point_distance(
            self.ox, self.oy, self.ux[:, None], self.uy[:, None], self.length[:, None], px, py
        )

    def corridor(self, i: int) -> Corridor:
        return Corridor((self.ox, self.oy), float(self.theta[i]), self.radius)


def fan_limits(x: float, y: float, radius: float, width: float) -> tuple[float, float] | None:
    """Angular range whose capsule spine exits the open edge clear of both side walls.

    Returns ``None`` when the subject sits too close to a side wall for any
    direction to qualify.
    """
    lo = math.atan2(radius - x, y)
    hi = math.atan2(width - radius - x, y)
    if lo > hi:
        return None
    return lo, hi


def make_fan(subject, scene: Scene, bins: int = DEFAULT_BINS, clearance: float = 0.0) -> Fan:
    if bins < 2:
        raise ValueError(f"need at least 2 direction bins, got {bins}")
    radius = subject.r + clearance
    w = scene.workspace
    limits = fan_limits(subject.x, subject.y, radius, w.width)
    lo, hi = limits if limits is not None else (-math.pi / 2, math.pi / 2)
    step = (hi - lo) / bins
    theta = lo + (np.arange(bins) + 0.5) * step
    ux, uy = direction_vector(theta)
    length = subject.y / np.cos(theta)
    exit_x = subject.x + length * ux
    wall_ok = corridor_wall_clear(subject.x, subject.y, exit_x, radius, w)
    if limits is None:
        wall_ok = np.zeros(bins, dtype=bool)
    return Fan(theta, subject.x, subject.y, ux, uy, length, radius, np.asarray(wall_ok, dtype=bool))


def _kept(scene: Scene, ignore: Iterable[str]) -> np.ndarray:
    skip = set(ignore)
    if not skip:
        return np.arange(len(scene.objects))
    return np.array([i for i, oid in enumerate(scene.ids) if oid not in skip], dtype=int)


def blocked_matrix(fan: Fan, scene: Scene, idx: np.ndarray) -> np.ndarray:
    """``(bins, len(idx))`` boolean matrix: does object ``idx[j]`` cut corridor ``i``."""
    tally(corridor_tests=len(fan.theta), histogram_builds=1)
    if len(idx) == 0:
        return np.zeros((len(fan.theta), 0), dtype=bool)
    pts = scene.centers[idx]
    d = fan.distances(pts[:, 0], pts[:, 1])
    return d < fan.radius + scene.radii[idx] - EPS_GEOM


def free_mask(subject, scene: Scene, ignore: Iterable[str] = (), reach: ReachParams = DEFAULT_REACH) -> np.ndarray:
    fan = make_fan(subject, scene, reach.bins, reach.clearance)
    blocked = blocked_matrix(fan, scene, _kept(scene, ignore))
    return fan.wall_ok & ~blocked.any(axis=1)


@dataclass(frozen=True)
class HistogramBin:
    theta: float
    free: bool
    blockers: tuple[str, ...]


@dataclass(frozen=True)
class DirectionHistogram:
    bins: tuple[HistogramBin, ...]

    @property
    def free_bins(self) -> list[int]:
        return [i for i, b in enumerate(self.bins) if b.free]

    @property
    def any_free(self) -> bool:
        return any(b.free for b in self.bins)

    def to_dict(self) -> dict:
        return {"bins": [{"theta": b.theta, "free": b.free, "blockers": list(b.blockers)} for b in self.bins]}


def build_histogram(
    subject, scene: Scene, ignore: Iterable[str] = (), bins: int = DEFAULT_BINS, clearance: float = 0.0
) -> DirectionHistogram:
    """Classify every approach direction of ``subject`` as free or blocked.

    Blocker lists hold the ids of objects cutting that direction's corridor,
    nearest to the open edge first. Directions closed by a wall carry the
    :data:`WALL` marker so that "free" and "no blockers" stay equivalent.
    """
    fan = make_fan(subject, scene, bins, clearance)
    idx = _kept(scene, ignore)
    blocked = blocked_matrix(fan, scene, idx)
    objs = scene.objects
    order = sorted(range(len(idx)), key=lambda j: (objs[idx[j]].y, objs[idx[j]].id))
    out = []
    for i in range(len(fan.theta)):
        row = blocked[i]
        ids = tuple(objs[idx[j]].id for j in order if row[j])
        if not fan.wall_ok[i]:
            ids = (WALL,) + ids
        out.append(HistogramBin(float(fan.theta[i]), not ids, ids))
    return DirectionHistogram(tuple(out))


def is_accessible(subject, scene: Scene, ignore: Iterable[str] = (), reach: ReachParams = DEFAULT_REACH) -> bool:
    return bool(free_mask(subject, scene, ignore, reach).any())


def _rank_key(scene: Scene, i: int, b: HistogramBin):
    depth = sum(scene.object(oid).y for oid in b.blockers if oid != WALL)
    return (len(b.blockers), depth, i)


def ranked_directions(hist: DirectionHistogram, scene: Scene) -> list[tuple[int, HistogramBin]]:
    """Bins not closed by a wall, cheapest first, one representative per blocker set."""
    seen = set()
    ranked = []
    for i, b in sorted(enumerate(hist.bins), key=lambda ib: _rank_key(scene, *ib)):
        if WALL in b.blockers or b.blockers in seen:
            continue
        seen.add(b.blockers)
        ranked.append((i, b))
    return ranked


def min_blocker_direction(
    subject, scene: Scene, ignore: Iterable[str] = (), reach: ReachParams = DEFAULT_REACH
) -> tuple[float, tuple[str, ...]]:
    """Direction with the fewest blockers.

    Ties go to the smaller summed blocker depth, then the lower bin index. If
    walls close every direction the first bin is returned with its
    :data:`WALL` marker.
    """
    hist = build_histogram(subject, scene, ignore, reach.bins, reach.clearance)
    ranked = ranked_directions(hist, scene)
    if not ranked:
        b = hist.bins[0]
        return b.theta, b.blockers
    _, b = ranked[0]
    return b.theta, b.blockers
