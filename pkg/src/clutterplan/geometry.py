"""Planar scene model: workspace, discs, corridors and collision predicates.

The workspace is the rectangle ``[0, width] x [0, depth]``. The edge ``y = 0``
is open (the robot reaches in from there); the side walls ``x = 0``,
``x = width`` and the back wall ``y = depth`` are impassable. Objects are
cylinders seen from above, so everything is a disc.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Iterable

import numpy as np

from clutterplan.counters import tally

EPS_GEOM = 1e-9  # cm; contacts closer than this count as tangency, not overlap


class Role(str, Enum):
    OBSTACLE = "obstacle"
    TARGET = "target"


class SlotState(str, Enum):
    CANDIDATE = "candidate"
    VALID = "valid"
    INVALID = "invalid"
    OCCUPIED = "occupied"


@dataclass(frozen=True)
class Workspace:
    width: float = 90.0
    depth: float = 45.0
    height: float = 45.0  # kept for bookkeeping only

    def __post_init__(self):
        if not (self.width > 0 and self.depth > 0):
            raise ValueError(f"workspace needs positive width and depth, got {self.width}x{self.depth}")

    @property
    def area(self) -> float:
        return self.width * self.depth


@dataclass(frozen=True)
class Disc:
    """Anonymous disc, used for virtual objects and ad-hoc queries."""

    x: float
    y: float
    r: float
    id: str | None = None


@dataclass(frozen=True)
class SceneObject:
    id: str
    x: float
    y: float
    r: float
    role: Role = Role.OBSTACLE

    @property
    def is_target(self) -> bool:
        return self.role is Role.TARGET


@dataclass(frozen=True)
class Slot:
    id: str
    x: float
    y: float
    r: float
    state: SlotState = SlotState.CANDIDATE


@dataclass(frozen=True)
class Corridor:
    """Capsule swept by a disc of ``radius`` moving from ``origin`` straight out
    of the open edge.

    ``direction`` is measured from the outward normal of the open edge (the
    ``-y`` axis), positive towards ``+x``; it must lie in ``(-pi/2, pi/2)``.
    """

    origin: tuple[float, float]
    direction: float
    radius: float

    def __post_init__(self):
        if not -math.pi / 2 < self.direction < math.pi / 2:
            raise ValueError(f"corridor direction {self.direction} does not exit through the open edge")

    @property
    def exit_point(self) -> tuple[float, float]:
        x, y = self.origin
        return (x + y * math.tan(self.direction), 0.0)


def discs_overlap(a, b) -> bool:
    """True iff the open interiors of two discs intersect (tangency is not overlap)."""
    return math.hypot(a.x - b.x, a.y - b.y) < a.r + b.r - EPS_GEOM


def disc_in_workspace(d, w: Workspace) -> bool:
    return (
        d.r - EPS_GEOM <= d.x <= w.width - d.r + EPS_GEOM
        and d.r - EPS_GEOM <= d.y <= w.depth - d.r + EPS_GEOM
    )


def direction_vector(theta):
    """Unit vector(s) for corridor angle(s) ``theta``; works on scalars and arrays."""
    return np.sin(theta), -np.cos(theta)


def segment_point_distance(ox, oy, ux, uy, length, px, py):
    """Distance from point(s) ``(px, py)`` to segment(s) ``o + t*u, t in [0, length]``.

    All arguments broadcast, so a ``(K, 1)`` set of segments against ``(N,)``
    points yields a ``(K, N)`` distance matrix.
    """
    wx = px - ox
    wy = py - oy
    t = np.clip(wx * ux + wy * uy, 0.0, length)
    return np.hypot(wx - t * ux, wy - t * uy)


def corridor_wall_clear(ox, oy, ex, radius, w: Workspace):
    """Wall test for capsule(s) from ``(ox, oy)`` to ``(ex, 0)``.

    The spine spans ``y`` in ``[0, oy]`` so the closest approach to a side wall
    is at one of the endpoints; the back wall only matters at the origin.
    """
    lo = np.minimum(ox, ex)
    hi = np.maximum(ox, ex)
    return (lo >= radius - EPS_GEOM) & (hi <= w.width - radius + EPS_GEOM) & (oy <= w.depth - radius + EPS_GEOM)


@dataclass(frozen=True)
class Scene:
    workspace: Workspace
    objects: tuple[SceneObject, ...] = ()
    slots: tuple[Slot, ...] = ()
    seed: int = 0

    def __post_init__(self):
        # accept lists from callers but store tuples so scenes stay hashable-ish and immutable
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "slots", tuple(self.slots))

    # -- lookups -------------------------------------------------------------
    @cached_property
    def _index(self) -> dict[str, SceneObject]:
        return {o.id: o for o in self.objects}

    def object(self, oid: str) -> SceneObject:
        return self._index[oid]

    def has_object(self, oid: str) -> bool:
        return oid in self._index

    @property
    def target(self) -> SceneObject:
        targets = [o for o in self.objects if o.is_target]
        if len(targets) != 1:
            raise ValueError(f"scene must hold exactly one target, found {len(targets)}")
        return targets[0]

    @property
    def obstacles(self) -> tuple[SceneObject, ...]:
        return tuple(o for o in self.objects if not o.is_target)

    def slot(self, sid: str) -> Slot:
        for s in self.slots:
            if s.id == sid:
                return s
        raise KeyError(sid)

    @property
    def free_slots(self) -> tuple[Slot, ...]:
        return tuple(s for s in self.slots if s.state is not SlotState.OCCUPIED)

    @property
    def slot_radius(self) -> float:
        return max((o.r for o in self.objects), default=0.0)

    # numpy views used by the vectorised predicates
    @cached_property
    def centers(self) -> np.ndarray:
        return np.array([(o.x, o.y) for o in self.objects], dtype=float).reshape(-1, 2)

    @cached_property
    def radii(self) -> np.ndarray:
        return np.array([o.r for o in self.objects], dtype=float)

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(o.id for o in self.objects)

    # -- functional updates ----------------------------------------------------
    def without(self, ids: Iterable[str]) -> Scene:
        drop = set(ids)
        if not drop:
            return self
        return replace(self, objects=tuple(o for o in self.objects if o.id not in drop))

    def with_objects(self, *objs) -> Scene:
        return replace(self, objects=self.objects + tuple(objs))

    def with_slots(self, slots: Iterable[Slot]) -> Scene:
        return replace(self, slots=tuple(slots))

    def moved(self, oid: str, x: float, y: float) -> Scene:
        return replace(self, objects=tuple(replace(o, x=x, y=y) if o.id == oid else o for o in self.objects))

    # -- checks ----------------------------------------------------------------
    def violations(self) -> list[str]:
        """Return human-readable invariant violations (empty when the scene is valid)."""
        problems = []
        for o in self.objects:
            if not disc_in_workspace(o, self.workspace):
                problems.append(f"object {o.id} leaves the workspace")
        objs = self.objects
        for i in range(len(objs)):
            for j in range(i + 1, len(objs)):
                if discs_overlap(objs[i], objs[j]):
                    problems.append(f"objects {objs[i].id} and {objs[j].id} overlap")
        n_targets = sum(o.is_target for o in objs)
        if n_targets != 1:
            problems.append(f"expected one target, found {n_targets}")
        if len({o.id for o in objs}) != len(objs):
            problems.append("duplicate object ids")
        for s in self.slots:
            if s.state is SlotState.OCCUPIED:
                continue
            for o in objs:
                if discs_overlap(s, o):
                    problems.append(f"slot {s.id} overlaps object {o.id}")
        return problems

    # -- serialisation ----------------------------------------------------------
    def to_dict(self) -> dict:
        w = self.workspace
        return {
            "workspace": {"w": w.width, "d": w.depth, "h": w.height},
            "objects": [{"id": o.id, "x": o.x, "y": o.y, "r": o.r, "role": o.role.value} for o in self.objects],
            "slots": [{"id": s.id, "x": s.x, "y": s.y, "r": s.r, "state": s.state.value} for s in self.slots],
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> Scene:
        ws = doc["workspace"]
        workspace = Workspace(float(ws["w"]), float(ws["d"]), float(ws.get("h", 45.0)))
        objects = [
            SceneObject(str(o["id"]), float(o["x"]), float(o["y"]), float(o["r"]), Role(o.get("role", "obstacle")))
            for o in doc.get("objects", [])
        ]
        slots = [
            Slot(str(s["id"]), float(s["x"]), float(s["y"]), float(s["r"]), SlotState(s.get("state", "candidate")))
            for s in doc.get("slots", [])
        ]
        return cls(workspace, tuple(objects), tuple(slots), int(doc.get("seed", 0)))

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> Scene:
        return cls.from_dict(json.loads(text))


def corridor_clear(c: Corridor, scene: Scene, ignore: Iterable[str] = ()) -> bool:
    """True iff the capsule of ``c`` touches no wall and no object outside ``ignore``."""
    tally(corridor_tests=1)
    ox, oy = c.origin
    ux, uy = direction_vector(c.direction)
    length = oy / math.cos(c.direction)
    ex = ox + length * ux
    if not corridor_wall_clear(ox, oy, ex, c.radius, scene.workspace):
        return False
    if not scene.objects:
        return True
    skip = set(ignore)
    keep = np.array([oid not in skip for oid in scene.ids], dtype=bool)
    if not keep.any():
        return True
    pts = scene.centers[keep]
    d = segment_point_distance(ox, oy, ux, uy, length, pts[:, 0], pts[:, 1])
    return bool(np.all(d >= c.radius + scene.radii[keep] - EPS_GEOM))
