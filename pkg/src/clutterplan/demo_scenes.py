"""Small hand-built scenes with known plans.

All of them use a narrow two-lane shelf (unit-radius discs, lanes at
``x = 1`` and ``x = 3.2``, 0.2 cm of play between lanes). With that spacing
an object is reachable exactly when nothing sits in front of it in its own
lane, so the expected plans can be worked out by hand.
"""

from __future__ import annotations

from clutterplan.geometry import Role, Scene, SceneObject, Slot, Workspace

LANE_A = 1.0
LANE_B = 3.2
SHELF = Workspace(width=4.2, depth=8.0, height=5.0)


def _obj(oid, x, y, role=Role.OBSTACLE):
    return SceneObject(oid, x, y, 1.0, role)


def _slot(sid, x, y):
    return Slot(sid, x, y, 1.0)


def monotone_scene() -> Scene:
    """Target behind o2 and o1 in lane B; lane A holds o0 between s0 (front) and s1 (back).

    Only s0 is valid at first, one short of the two blockers, so o0 is moved
    into the occluded s1. That frees o0's spot (s2); o2 goes there because
    filling s0 would cut s2 off; o1 then takes s0.
    """
    objects = [
        _obj("ot", LANE_B, 7.0, Role.TARGET),
        _obj("o1", LANE_B, 5.0),
        _obj("o2", LANE_B, 3.0),
        _obj("o0", LANE_A, 5.0),
    ]
    slots = [_slot("s0", LANE_A, 3.0), _slot("s1", LANE_A, 7.0)]
    return Scene(SHELF, objects, slots, seed=0)


def nonmonotone_scene() -> Scene:
    """Target behind o1 in lane B with free slot s0 in front; lane A is o2, o0, then s1.

    No slot is valid at the start: s0 would wall the target in and s1 is
    buried. Reaching s1 means lifting o2 then o0, so o2 is parked in s0
    first (and must later move again).
    """
    objects = [
        _obj("ot", LANE_B, 7.0, Role.TARGET),
        _obj("o1", LANE_B, 5.0),
        _obj("o0", LANE_A, 5.0),
        _obj("o2", LANE_A, 3.0),
    ]
    slots = [_slot("s0", LANE_B, 3.0), _slot("s1", LANE_A, 7.0)]
    return Scene(SHELF, objects, slots, seed=0)


def occluding_slot_scene() -> Scene:
    """One blocker o1 before the target; s0 sits right in front of o1, s1 is buried behind o0."""
    objects = [
        _obj("ot", LANE_B, 7.0, Role.TARGET),
        _obj("o1", LANE_B, 5.0),
        _obj("o0", LANE_A, 5.0),
    ]
    slots = [_slot("s0", LANE_B, 3.0), _slot("s1", LANE_A, 7.0)]
    return Scene(SHELF, objects, slots, seed=0)


def overfull_scene() -> Scene:
    """Three blockers stacked in front of the target, but only two slots."""
    ws = Workspace(width=4.2, depth=10.0, height=5.0)
    objects = [
        _obj("ot", LANE_B, 9.0, Role.TARGET),
        _obj("o1", LANE_B, 7.0),
        _obj("o2", LANE_B, 5.0),
        _obj("o3", LANE_B, 3.0),
    ]
    slots = [_slot("s0", LANE_A, 3.0), _slot("s1", LANE_A, 5.5)]
    return Scene(ws, objects, slots, seed=0)


SCENES = {
    "monotone": monotone_scene,
    "nonmonotone": nonmonotone_scene,
    "occluding-slot": occluding_slot_scene,
    "overfull": overfull_scene,
}
