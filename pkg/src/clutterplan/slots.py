"""Buffer slots: sampling, validity filtering, occlusion and the beta score.

A slot is a disc of uniform radius (the largest object radius in the scene)
where a relocated object may be put down. Slots are sampled once, then
classified every planning step:

* *valid*: reachable now, and a virtual object sitting in it would not stop
  the remaining relocation sequence (and finally the goal) from being
  cleared one object at a time;
* *occluded*: not reachable now at all;
* beta(s): how many other valid slots stop being reachable once ``s`` is
  filled.

``find_valid_candidates`` and ``compute_beta`` reuse the per-direction
blocking of the unmodified scene and only test the extra virtual disc,
which is exactly what rebuilding every histogram with the disc added would
give. The ``*_reference`` twins do that full rebuild and exist to check the
shortcut.
"""

from __future__ import annotations

import re
from dataclasses import replace
from typing import Iterable, Sequence

import numpy as np

from clutterplan.accessibility import (
    DEFAULT_REACH,
    ReachParams,
    _kept,
    blocked_matrix,
    is_accessible,
    make_fan,
)
from clutterplan.counters import tally
from clutterplan.geometry import (
    EPS_GEOM,
    Scene,
    SceneObject,
    Slot,
    SlotState,
    disc_in_workspace,
    discs_overlap,
)

DEFAULT_TRIALS = 1000
VIRTUAL_ID = "~virtual"


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def next_slot_id(slots: Iterable[Slot]) -> str:
    """Continue the ``s<number>`` naming, keeping any zero padding in use."""
    best, width = -1, 1
    for s in slots:
        m = re.fullmatch(r"s(\d+)", s.id)
        if m:
            best = max(best, int(m.group(1)))
            width = max(width, len(m.group(1)))
    return f"s{best + 1:0{width}d}"


def sample_candidate_slots(
    scene: Scene, r_slot: float | None = None, trials: int = DEFAULT_TRIALS, rng=None
) -> list[Slot]:
    """Rejection-sample non-overlapping slot discs in the free space.

    ``trials`` counts every draw, accepted or not. Accepted discs are blocked
    out for later draws. Returns slots in acceptance order, all in the
    candidate state.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if r_slot is None:
        r_slot = scene.slot_radius
    if r_slot <= 0:
        raise ValueError("slot radius must be positive")
    gen = _as_rng(rng)
    w = scene.workspace
    draws = gen.uniform((0.0, 0.0), (w.width, w.depth), size=(trials, 2))
    occupied = [(o.x, o.y, o.r) for o in scene.objects]
    occupied += [(s.x, s.y, s.r) for s in scene.slots]
    pts = np.array([(x, y) for x, y, _ in occupied], dtype=float).reshape(-1, 2)
    rad = np.array([r for _, _, r in occupied], dtype=float)
    width = 3
    accepted: list[Slot] = []
    for x, y in draws:
        if not (r_slot <= x <= w.width - r_slot and r_slot <= y <= w.depth - r_slot):
            continue
        if len(rad) and np.any(np.hypot(pts[:, 0] - x, pts[:, 1] - y) < rad + r_slot - EPS_GEOM):
            continue
        accepted.append(Slot(f"s{len(accepted):0{width}d}", float(x), float(y), float(r_slot)))
        pts = np.vstack([pts, (x, y)])
        rad = np.append(rad, r_slot)
    return accepted


def _virtual(slot) -> SceneObject:
    return SceneObject(VIRTUAL_ID, slot.x, slot.y, slot.r)


def _sequential_stages(scene: Scene, sequence: Sequence[str], subject):
    """Scene states for the sequential check: yields ``(scene, disc, ignore)``.

    The head of the sequence is the object being placed, so it is lifted
    first; each later element is checked and then removed; the subject comes
    last.
    """
    current = scene.without(sequence[:1])
    for oid in sequence[1:]:
        obj = current.object(oid)
        yield current, obj, {oid}
        current = current.without([oid])
    sid = getattr(subject, "id", None)
    yield current, subject, {sid} if sid else set()


def find_valid_candidates(
    candidates: Sequence[Slot],
    scene: Scene,
    sequence: Sequence[str],
    subject,
    reach: ReachParams = DEFAULT_REACH,
) -> list[Slot]:
    """Slots that are reachable and keep ``sequence`` then ``subject`` clearable.

    Returns the valid subset (state set to valid), in input order.
    """
    cands = [s for s in candidates if s.state is not SlotState.OCCUPIED]
    if not cands:
        return []
    ok = np.array([is_accessible(s, scene, (), reach) for s in cands], dtype=bool)
    cx = np.array([s.x for s in cands])
    cy = np.array([s.y for s in cands])
    cr = np.array([s.r for s in cands])
    for stage_scene, disc, ignore in _sequential_stages(scene, list(sequence), subject):
        if not ok.any():
            break
        fan = make_fan(disc, stage_scene, reach.bins, reach.clearance)
        base_free = fan.wall_ok & ~blocked_matrix(fan, stage_scene, _kept(stage_scene, ignore)).any(axis=1)
        # (bins, slots): does the virtual disc in slot j cut corridor i
        tally(corridor_tests=len(fan.theta) * len(cands))
        cut = fan.distances(cx, cy) < fan.radius + cr - EPS_GEOM
        ok &= (base_free[:, None] & ~cut).any(axis=0)
    return [replace(s, state=SlotState.VALID) for s, good in zip(cands, ok) if good]


def find_valid_candidates_reference(
    candidates: Sequence[Slot],
    scene: Scene,
    sequence: Sequence[str],
    subject,
    reach: ReachParams = DEFAULT_REACH,
) -> list[Slot]:
    """Literal per-slot rebuild of :func:`find_valid_candidates`."""
    out = []
    for s in candidates:
        if s.state is SlotState.OCCUPIED or not is_accessible(s, scene, (), reach):
            continue
        with_v = scene.with_objects(_virtual(s))
        if all(is_accessible(d, sc, ign, reach) for sc, d, ign in _sequential_stages(with_v, list(sequence), subject)):
            out.append(replace(s, state=SlotState.VALID))
    return out


def classify(candidates: Sequence[Slot], valid: Iterable[Slot]) -> list[Slot]:
    """Relabel every non-occupied candidate as valid or invalid."""
    good = {s.id for s in valid}
    out = []
    for s in candidates:
        if s.state is SlotState.OCCUPIED:
            out.append(s)
        else:
            out.append(replace(s, state=SlotState.VALID if s.id in good else SlotState.INVALID))
    return out


def occluded_slots(candidates: Sequence[Slot], scene: Scene, reach: ReachParams = DEFAULT_REACH) -> list[Slot]:
    """Free candidates that no straight approach can currently reach."""
    return [
        s for s in candidates if s.state is not SlotState.OCCUPIED and not is_accessible(s, scene, (), reach)
    ]


def compute_beta(valid: Sequence[Slot], scene: Scene, reach: ReachParams = DEFAULT_REACH) -> dict[str, int]:
    """beta(s) for each valid slot: other valid slots left unreachable by filling ``s``."""
    n = len(valid)
    tally(beta_evals=n)
    if n == 0:
        return {}
    cx = np.array([s.x for s in valid])
    cy = np.array([s.y for s in valid])
    cr = np.array([s.r for s in valid])
    everyone = np.arange(len(scene.objects))
    # lost[i, j]: slot j unreachable once slot i holds a virtual object
    lost = np.zeros((n, n), dtype=bool)
    for j, s in enumerate(valid):
        fan = make_fan(s, scene, reach.bins, reach.clearance)
        base_free = fan.wall_ok & ~blocked_matrix(fan, scene, everyone).any(axis=1)
        tally(corridor_tests=len(fan.theta) * (n - 1))
        cut = fan.distances(cx, cy) < fan.radius + cr - EPS_GEOM
        lost[:, j] = ~(base_free[:, None] & ~cut).any(axis=0)
    np.fill_diagonal(lost, False)
    return {s.id: int(lost[i].sum()) for i, s in enumerate(valid)}


def compute_beta_reference(valid: Sequence[Slot], scene: Scene, reach: ReachParams = DEFAULT_REACH) -> dict[str, int]:
    """Brute force: rebuild every slot's reachability with each virtual object added."""
    beta = {}
    for si in valid:
        with_v = scene.with_objects(_virtual(si))
        beta[si.id] = sum(not is_accessible(sj, with_v, (), reach) for sj in valid if sj.id != si.id)
    return beta


def mint_vacated_slot(scene: Scene, former, r_slot: float | None = None) -> Slot | None:
    """Turn the footprint an object just left into a candidate slot, if a full slot fits.

    ``scene`` must no longer hold ``former`` at its old position (it may
    already sit elsewhere).
    """
    if r_slot is None:
        r_slot = max(scene.slot_radius, former.r)
    probe = Slot(next_slot_id(scene.slots), former.x, former.y, r_slot)
    if not disc_in_workspace(probe, scene.workspace):
        return None
    if any(discs_overlap(probe, o) for o in scene.objects):
        return None
    if any(discs_overlap(probe, s) for s in scene.slots):
        return None
    return probe
