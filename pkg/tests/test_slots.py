import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clutterplan.demo_scenes import monotone_scene, nonmonotone_scene, occluding_slot_scene
from clutterplan.geometry import Scene, SlotState, Workspace, disc_in_workspace, discs_overlap
from clutterplan.harness import InstanceParams, generate_instance
from clutterplan.planner import apply_move, relocate_plan
from clutterplan.slots import (
    classify,
    compute_beta,
    compute_beta_reference,
    find_valid_candidates,
    find_valid_candidates_reference,
    mint_vacated_slot,
    next_slot_id,
    occluded_slots,
    sample_candidate_slots,
)
from conftest import DESK, obj, slot, target

# smallest |S_c| seen over seeds 0..99 on the empty desk (r_slot 3.5, 1000 trials)
OBSERVED_MIN_EMPTY_DESK = 40


def test_packed_workspace_yields_no_slots():
    tiny = Workspace(7.0, 7.0)
    scene = Scene(tiny, [target(3.5, 3.5)])
    assert sample_candidate_slots(scene, 3.5, 1000, 0) == []


def test_empty_desk_gets_at_least_twenty_slots():
    empty = Scene(DESK, [])
    counts = [len(sample_candidate_slots(empty, 3.5, 1000, seed)) for seed in range(100)]
    assert min(counts) >= 20
    assert min(counts) == OBSERVED_MIN_EMPTY_DESK


def test_sampling_is_seeded():
    scene = Scene(DESK, [target(45, 22.5), obj("o1", 20, 10)])
    assert sample_candidate_slots(scene, 3.5, 500, 3) == sample_candidate_slots(scene, 3.5, 500, 3)
    assert sample_candidate_slots(scene, 3.5, 500, 3) != sample_candidate_slots(scene, 3.5, 500, 4)


@given(st.integers(0, 2**32 - 1), st.integers(1, 400))
def test_sampled_slots_respect_walls_objects_and_each_other(seed, trials):
    scene = Scene(DESK, [target(45, 22.5), obj("o1", 20, 10), obj("o2", 70, 30)])
    slots = sample_candidate_slots(scene, 3.5, trials, seed)
    assert len(slots) <= trials
    for i, s in enumerate(slots):
        assert s.state is SlotState.CANDIDATE and s.r == 3.5
        assert disc_in_workspace(s, DESK)
        assert not any(discs_overlap(s, o) for o in scene.objects)
        assert not any(discs_overlap(s, t) for t in slots[:i])


def test_sampling_rejects_bad_arguments():
    scene = Scene(DESK, [target(45, 22.5)])
    with pytest.raises(ValueError):
        sample_candidate_slots(scene, 3.5, 0)
    with pytest.raises(ValueError):
        sample_candidate_slots(scene, 0.0, 10)


def test_valid_slot_in_open_front_with_empty_sequence():
    scene = Scene(DESK, [target(45, 30)], [slot("s0", 20, 5)])
    assert [s.id for s in find_valid_candidates(scene.slots, scene, (), scene.target)] == ["s0"]


def test_slot_that_would_bury_the_blocker_is_invalid():
    scene = occluding_slot_scene()
    seq = relocate_plan(scene, scene.target)
    assert seq.ids == ("o1",)
    valid = find_valid_candidates(scene.free_slots, scene, seq.ids, scene.target)
    assert valid == []
    labelled = classify(scene.slots, valid)
    assert {s.id: s.state for s in labelled} == {"s0": SlotState.INVALID, "s1": SlotState.INVALID}


def test_front_slot_valid_back_slot_unreachable():
    scene = monotone_scene()
    seq = relocate_plan(scene, scene.target)
    valid = find_valid_candidates(scene.free_slots, scene, seq.ids, scene.target)
    assert [s.id for s in valid] == ["s0"]
    assert all(s.state is SlotState.VALID for s in valid)


def test_occluded_slots():
    assert occluded_slots([], Scene(DESK, [])) == []
    scene = monotone_scene()
    assert [s.id for s in occluded_slots(scene.free_slots, scene)] == ["s1"]
    open_scene = Scene(DESK, [target(45, 40)], [slot("s0", 10, 5), slot("s1", 80, 5)])
    assert occluded_slots(open_scene.slots, open_scene) == []


def test_beta_trivial_cases():
    scene = Scene(DESK, [target(45, 30)], [slot("s0", 20, 5), slot("s1", 70, 5)])
    assert compute_beta(scene.slots[:1], scene) == {"s0": 0}
    assert compute_beta(scene.slots, scene) == {"s0": 0, "s1": 0}
    assert compute_beta([], scene) == {}


def test_beta_after_first_acquisition_move():
    scene = apply_move(monotone_scene(), "o0", "s1")
    seq = relocate_plan(scene, scene.target)
    valid = find_valid_candidates(scene.free_slots, scene, seq.ids, scene.target)
    beta = compute_beta(valid, scene)
    assert beta == {"s0": 1, "s2": 0}
    assert beta == compute_beta_reference(valid, scene)


def test_mint_uniform_radius_always_fits():
    scene = monotone_scene()
    former = scene.object("o0")
    moved = scene.moved("o0", 1.0, 7.0)
    minted = mint_vacated_slot(moved, former)
    assert minted is not None
    assert (minted.x, minted.y, minted.r, minted.id) == (1.0, 5.0, 1.0, "s2")


def test_mint_pinched_small_object_gets_no_slot():
    small = obj("o2", 36.5, 20, 2.0)
    scene = Scene(DESK, [target(80, 40), obj("o1", 30, 20), obj("o3", 43, 20), small])
    assert scene.violations() == []
    assert mint_vacated_slot(scene.without(["o2"]), small) is None


def test_next_slot_id_keeps_padding():
    assert next_slot_id([slot("s000", 0, 0), slot("s017", 0, 0)]) == "s018"
    assert next_slot_id([slot("s1", 0, 0)]) == "s2"
    assert next_slot_id([]) == "s0"


def _random_scene(seed, n):
    return generate_instance(InstanceParams(n=n, seed=seed, trials=300))


@pytest.mark.parametrize("seed", range(8))
def test_fast_validity_matches_reference(seed):
    scene = _random_scene(seed, 13)
    seq = relocate_plan(scene, scene.target)
    assert seq is not None
    fast = find_valid_candidates(scene.slots, scene, seq.ids, scene.target)
    ref = find_valid_candidates_reference(scene.slots, scene, seq.ids, scene.target)
    assert fast == ref


@pytest.mark.parametrize("seed", range(8))
def test_fast_beta_matches_reference(seed):
    scene = _random_scene(100 + seed, 15)
    reachable = [s for s in scene.slots if not occluded_slots([s], scene)]
    assert compute_beta(reachable, scene) == compute_beta_reference(reachable, scene)


def test_beta_bounded_by_valid_count():
    scene = _random_scene(5, 15)
    seq = relocate_plan(scene, scene.target)
    valid = find_valid_candidates(scene.slots, scene, seq.ids, scene.target)
    assert all(0 <= b <= len(valid) - 1 for b in compute_beta(valid, scene).values())


def test_valid_and_occluded_are_disjoint():
    for seed in range(5):
        scene = _random_scene(seed, 15)
        seq = relocate_plan(scene, scene.target)
        valid = {s.id for s in find_valid_candidates(scene.slots, scene, seq.ids, scene.target)}
        occluded = {s.id for s in occluded_slots(scene.slots, scene)}
        assert not valid & occluded
