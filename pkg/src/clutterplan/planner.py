"""Rearrangement planning: where to put each object that blocks the target.

The planner keeps every relocated object inside the workspace. Each step it
re-derives the relocation sequence for the target, filters the sampled
slots down to the valid ones and puts the head of the sequence into the
valid slot that costs the fewest other valid slots (lowest beta). When valid
slots run short it first clears an occluded slot, which frees the cleared
objects' footprints as new slots.

``Strategy.DEEPEST`` and ``Strategy.FARTHEST`` are distance-based baselines
without beta and without slot acquisition: they give up as soon as valid
slots run short. By default they pick from every slot the end-effector can
currently reach (``BaselinePool.REACHABLE``), so a careless placement can
bury the target or a later blocker; ``BaselinePool.VALID`` restricts them
to valid slots instead.
"""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, Sequence

from clutterplan.accessibility import (
    DEFAULT_REACH,
    WALL,
    ReachParams,
    build_histogram,
    is_accessible,
    ranked_directions,
)
from clutterplan.counters import Counters, counting, tally
from clutterplan.geometry import Scene, Slot, SlotState, disc_in_workspace, discs_overlap
from clutterplan.slots import (
    DEFAULT_TRIALS,
    compute_beta,
    find_valid_candidates,
    mint_vacated_slot,
    occluded_slots,
    sample_candidate_slots,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET_S = 300.0


class Strategy(str, Enum):
    PROPOSED = "proposed"
    DEEPEST = "deepest"
    FARTHEST = "farthest"


class FailReason(str, Enum):
    INSUFFICIENT_SPACE = "insufficient-space"
    NO_OCCLUDED_SLOTS = "no-occluded-slots"
    INSUFFICIENT_ACQUISITION_SLOTS = "insufficient-acquisition-slots"
    INFEASIBLE_RELOCATION = "infeasible-relocation"
    TIMEOUT = "timeout"
    # baselines only: they cannot acquire slots
    NON_MONOTONE_REQUIRED = "non-monotone-required"


class BaselinePool(str, Enum):
    REACHABLE = "reachable"
    VALID = "valid"


PLANNER_FAIL_REASONS = frozenset(FailReason) - {FailReason.NON_MONOTONE_REQUIRED}


@dataclass(frozen=True)
class RelocationSequence:
    """Objects to lift, in order, before ``goal`` can be reached."""

    ids: tuple[str, ...] = ()
    goal: str | None = None

    def __post_init__(self):
        if len(set(self.ids)) != len(self.ids):
            raise ValueError(f"duplicate ids in relocation sequence {self.ids}")

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self):
        return iter(self.ids)

    def __getitem__(self, i):
        return self.ids[i]


@dataclass(frozen=True)
class Action:
    step: int
    object: str
    source: tuple[float, float]
    slot: str
    destination: tuple[float, float]
    acquisition: bool = False

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "object": self.object,
            "from": list(self.source),
            "slot": self.slot,
            "to": list(self.destination),
            "acquisition": self.acquisition,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Action:
        return cls(
            int(d["step"]),
            str(d["object"]),
            tuple(map(float, d["from"])),
            str(d["slot"]),
            tuple(map(float, d["to"])),
            bool(d.get("acquisition", False)),
        )


@dataclass
class PlanTrace:
    strategy: Strategy
    actions: list[Action] = field(default_factory=list)
    success: bool = False
    reason: FailReason | None = None
    detail: str = ""
    counters: Counters = field(default_factory=Counters)
    plan_time_ms: float = 0.0
    final_scene: Scene | None = None

    @property
    def k(self) -> int:
        return len(self.actions)

    @property
    def monotone(self) -> bool:
        """True iff the slot-acquisition branch never fired."""
        return not any(a.acquisition for a in self.actions)

    @property
    def outcome(self) -> str:
        return "success" if self.success else "fail"

    def to_dict(self) -> dict:
        doc = {
            "outcome": self.outcome,
            "strategy": self.strategy.value,
            "k": self.k,
            "monotone": self.monotone,
            "actions": [a.to_dict() for a in self.actions],
            "counters": {
                "corridor_tests": self.counters.corridor_tests,
                "beta_evals": self.counters.beta_evals,
                "relocate_calls": self.counters.relocate_calls,
                "plan_time_ms": self.plan_time_ms,
            },
        }
        if self.reason is not None:
            doc["reason"] = self.reason.value
        if self.detail:
            doc["detail"] = self.detail
        return doc

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> PlanTrace:
        c = doc.get("counters", {})
        return cls(
            strategy=Strategy(doc.get("strategy", "proposed")),
            actions=[Action.from_dict(a) for a in doc.get("actions", [])],
            success=doc["outcome"] == "success",
            reason=FailReason(doc["reason"]) if doc.get("reason") else None,
            detail=doc.get("detail", ""),
            counters=Counters(
                corridor_tests=int(c.get("corridor_tests", 0)),
                beta_evals=int(c.get("beta_evals", 0)),
                relocate_calls=int(c.get("relocate_calls", 0)),
            ),
            plan_time_ms=float(c.get("plan_time_ms", 0.0)),
        )


# --------------------------------------------------------------------------
# relocation sequence


def _subject_id(subject) -> str | None:
    return getattr(subject, "id", None)


def relocate_plan(scene: Scene, subject, reach: ReachParams = DEFAULT_REACH) -> RelocationSequence | None:
    """Ordered objects whose removal makes ``subject`` reachable, or ``None``.

    Greedy: take the approach direction with the fewest blockers and lift
    them nearest-to-the-open-edge first. A blocker that cannot be reached at
    its turn gets its own sequence spliced in front (recursively, refusing
    cycles). Directions are tried cheapest first until one clears.
    """
    memo: dict = {}
    ids = _relocate(scene, subject, reach, frozenset(), memo)
    if ids is None:
        return None
    return RelocationSequence(tuple(ids), _subject_id(subject))


def _relocate(scene: Scene, subject, reach, stack: frozenset, memo: dict) -> list[str] | None:
    tally(relocate_calls=1)
    sid = _subject_id(subject)
    ignore = {sid} if sid else set()
    key = (sid, subject.x, subject.y, frozenset(scene.ids), stack)
    if key in memo:
        return memo[key]
    memo[key] = None  # provisional: guards against re-entry through a cycle
    if is_accessible(subject, scene, ignore, reach):
        memo[key] = []
        return []
    hist = build_histogram(subject, scene, ignore, reach.bins, reach.clearance)
    inner = stack | ignore
    result = None
    for _, b in ranked_directions(hist, scene):
        order = _clear(scene, b.blockers, reach, inner, memo)
        if order is not None and is_accessible(subject, scene.without(order), ignore, reach):
            result = order
            break
    memo[key] = result
    return result


def _clear(scene: Scene, blockers: Sequence[str], reach, stack: frozenset, memo: dict) -> list[str] | None:
    order: list[str] = []
    current = scene
    for oid in blockers:
        if oid == WALL or oid in stack:
            return None
        if oid in order:
            continue
        obj = current.object(oid)
        if not is_accessible(obj, current, {oid}, reach):
            sub = _relocate(current, obj, reach, stack | {oid}, memo)
            if sub is None or any(x in stack for x in sub):
                return None
            order.extend(sub)
            current = current.without(sub)
        order.append(oid)
        current = current.without([oid])
    return order


def is_sequentially_clearable(scene: Scene, sequence: Sequence[str], subject, reach=DEFAULT_REACH) -> bool:
    """Each element reachable at its turn (then removed), subject reachable at the end."""
    current = scene
    for oid in sequence:
        if not is_accessible(current.object(oid), current, {oid}, reach):
            return False
        current = current.without([oid])
    sid = _subject_id(subject)
    return is_accessible(subject, current, {sid} if sid else set(), reach)


# --------------------------------------------------------------------------
# slot choice


def choose_slot(strategy: Strategy, valid: Sequence[Slot], beta: dict[str, int] | None, scene: Scene) -> Slot:
    """Pick the destination slot for the next object.

    * proposed: lowest beta; ties to the slot farther from the target, then id
    * farthest: largest distance from the target
    * deepest: largest distance from the open edge
    """
    if not valid:
        raise ValueError("no valid slot to choose from")
    t = scene.target

    def dist(s):
        return math.hypot(s.x - t.x, s.y - t.y)

    strategy = Strategy(strategy)
    if strategy is Strategy.PROPOSED:
        if beta is None:
            raise ValueError("proposed strategy needs beta values")
        return min(valid, key=lambda s: (beta[s.id], -dist(s), s.id))
    if strategy is Strategy.FARTHEST:
        return min(valid, key=lambda s: (-dist(s), s.id))
    return min(valid, key=lambda s: (-s.y, s.id))


# --------------------------------------------------------------------------
# scene updates


def apply_move(scene: Scene, oid: str, slot_id: str) -> Scene:
    """Move object ``oid`` into slot ``slot_id`` and update slot bookkeeping.

    The destination becomes occupied; a slot the object was sitting in goes
    back to candidate; the vacated footprint becomes a new candidate slot
    when a whole slot fits there.
    """
    obj = scene.object(oid)
    dest = scene.slot(slot_id)
    slots = []
    for s in scene.slots:
        if s.id == slot_id:
            s = replace(s, state=SlotState.OCCUPIED)
        elif s.state is SlotState.OCCUPIED and math.isclose(s.x, obj.x) and math.isclose(s.y, obj.y):
            s = replace(s, state=SlotState.CANDIDATE)
        slots.append(s)
    moved = replace(scene.moved(oid, dest.x, dest.y), slots=tuple(slots))
    minted = mint_vacated_slot(moved, obj)
    if minted is not None:
        moved = moved.with_slots(moved.slots + (minted,))
    return moved


def ensure_slots(scene: Scene, trials: int = DEFAULT_TRIALS, rng=None) -> Scene:
    """Sample candidate slots if the scene carries none."""
    if scene.slots:
        return scene
    seed = scene.seed if rng is None else rng
    return scene.with_slots(sample_candidate_slots(scene, trials=trials, rng=seed))


# --------------------------------------------------------------------------
# main loop


def plan_rearrangement(
    scene: Scene,
    strategy: Strategy = Strategy.PROPOSED,
    time_budget_s: float = DEFAULT_BUDGET_S,
    reach: ReachParams = DEFAULT_REACH,
    trials: int = DEFAULT_TRIALS,
    baseline_pool: BaselinePool = BaselinePool.REACHABLE,
) -> PlanTrace:
    """Plan pick-and-place actions until the target is reachable.

    Candidate slots already on ``scene`` are used as-is; otherwise they are
    sampled with ``trials`` draws seeded by ``scene.seed``.
    """
    strategy = Strategy(strategy)
    pool = BaselinePool(baseline_pool)
    trace = PlanTrace(strategy)
    t0 = time.perf_counter()
    with counting(trace.counters):
        scene = ensure_slots(scene, trials)
        try:
            _run(scene, strategy, time_budget_s, reach, trace, t0, pool)
        finally:
            trace.plan_time_ms = (time.perf_counter() - t0) * 1e3
    return trace


def _fail(trace: PlanTrace, reason: FailReason, detail: str = "") -> None:
    trace.success = False
    trace.reason = reason
    trace.detail = detail
    log.debug("plan failed after %d actions: %s %s", trace.k, reason.value, detail)


def _run(scene, strategy, budget, reach, trace, t0, pool) -> None:
    target = scene.target
    trace.final_scene = scene
    seq = relocate_plan(scene, target, reach)
    if seq is None:
        return _fail(trace, FailReason.INFEASIBLE_RELOCATION, "target")
    if len(seq) > len(scene.free_slots):
        return _fail(trace, FailReason.INSUFFICIENT_SPACE, "not enough empty space")
    seen = set()

    def move(oid, slot, acquisition):
        nonlocal scene
        obj = scene.object(oid)
        trace.actions.append(Action(trace.k, oid, (obj.x, obj.y), slot.id, (slot.x, slot.y), acquisition))
        scene = apply_move(scene, oid, slot.id)
        trace.final_scene = scene

    while len(seq):
        if time.perf_counter() - t0 > budget:
            return _fail(trace, FailReason.TIMEOUT, f"budget {budget}s exceeded")
        # a repeated configuration means the deterministic loop will cycle until the budget runs out
        state = (tuple((o.id, o.x, o.y) for o in scene.objects), len(scene.slots))
        if state in seen:
            return _fail(trace, FailReason.TIMEOUT, "planner revisited a configuration")
        seen.add(state)

        free = scene.free_slots
        valid = find_valid_candidates(free, scene, seq.ids, target, reach)
        if len(valid) < len(seq):
            if strategy is not Strategy.PROPOSED:
                return _fail(trace, FailReason.NON_MONOTONE_REQUIRED, "non-monotone required")
            occluded = occluded_slots(free, scene, reach)
            if not occluded:
                return _fail(trace, FailReason.NO_OCCLUDED_SLOTS)
            best, best_seq = None, None
            for s in occluded:
                cand = relocate_plan(scene, s, reach)
                if cand is not None and (best_seq is None or len(cand) < len(best_seq)):
                    best, best_seq = s, cand
            if best is None:
                return _fail(trace, FailReason.INFEASIBLE_RELOCATION, "no occluded slot can be cleared")
            valid2 = find_valid_candidates(free, scene, best_seq.ids, best, reach)
            if len(best_seq) - 1 > len(valid2):
                return _fail(trace, FailReason.INSUFFICIENT_ACQUISITION_SLOTS, "not enough empty slots to place")
            if len(best_seq) == 1:
                move(best_seq[0], best, True)
            else:
                beta2 = compute_beta(valid2, scene, reach)
                move(best_seq[0], choose_slot(Strategy.PROPOSED, valid2, beta2, scene), True)
        elif strategy is Strategy.PROPOSED:
            move(seq[0], choose_slot(strategy, valid, compute_beta(valid, scene, reach), scene), False)
        else:
            options = valid if pool is BaselinePool.VALID else _reachable(free, scene, reach)
            move(seq[0], choose_slot(strategy, options, None, scene), False)
        seq = relocate_plan(scene, target, reach)
        if seq is None:
            return _fail(trace, FailReason.INFEASIBLE_RELOCATION, "target")
    trace.success = True


def _reachable(slots: Sequence[Slot], scene: Scene, reach: ReachParams) -> list[Slot]:
    return [s for s in slots if is_accessible(s, scene, (), reach)]


# --------------------------------------------------------------------------
# replay


@dataclass(frozen=True)
class Validation:
    ok: bool
    step: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def replay(scene: Scene, actions: Sequence[Action]) -> Iterator[Scene]:
    """Yield the scene before the first action and after each one."""
    yield scene
    for a in actions:
        scene = apply_move(scene, a.object, a.slot)
        yield scene


def validate_plan(scene: Scene, trace: PlanTrace, reach: ReachParams = DEFAULT_REACH, trials: int = DEFAULT_TRIALS) -> Validation:
    """Replay ``trace`` from scratch and check every pick and place.

    Picks must be reachable; the place location must lie in the workspace,
    overlap nothing and be reachable with the object in hand; after the last
    action the target must be reachable.
    """
    scene = ensure_slots(scene, trials)
    target_id = scene.target.id
    for i, a in enumerate(trace.actions):
        if not scene.has_object(a.object):
            return Validation(False, i, f"unknown object {a.object}")
        obj = scene.object(a.object)
        if obj.is_target:
            return Validation(False, i, "target may not be relocated")
        if not (math.isclose(obj.x, a.source[0], abs_tol=1e-6) and math.isclose(obj.y, a.source[1], abs_tol=1e-6)):
            return Validation(False, i, f"{a.object} is not at the recorded source")
        if not is_accessible(obj, scene, {obj.id}, reach):
            return Validation(False, i, f"{a.object} unreachable at pick time")
        lifted = scene.without([obj.id])
        placed = replace(obj, x=a.destination[0], y=a.destination[1])
        if not disc_in_workspace(placed, scene.workspace):
            return Validation(False, i, "destination leaves the workspace")
        clash = [o.id for o in lifted.objects if discs_overlap(placed, o)]
        if clash:
            return Validation(False, i, f"destination overlaps {clash[0]}")
        if not is_accessible(placed, lifted, (), reach):
            return Validation(False, i, "destination unreachable at place time")
        try:
            slot = scene.slot(a.slot)
        except KeyError:
            return Validation(False, i, f"unknown slot {a.slot}")
        if not (math.isclose(slot.x, placed.x, abs_tol=1e-6) and math.isclose(slot.y, placed.y, abs_tol=1e-6)):
            return Validation(False, i, "destination does not match the slot")
        scene = apply_move(scene, a.object, a.slot)
    if not is_accessible(scene.object(target_id), scene, {target_id}, reach):
        return Validation(False, len(trace.actions), "target still unreachable")
    return Validation(True)
