import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from oblot.geometry import Tolerance, dist
from oblot.model import (
    AdversaryContractError,
    Configuration,
    FrameSpec,
    LocalFrame,
    ModelError,
    apply_move,
    count_distinct,
    frame_at,
    take_snapshot,
    to_global,
)

TOL = Tolerance(1e-9)


def make_config(positions):
    return Configuration(dict(enumerate(positions)), TOL)


# -- configurations and clustering --------------------------------------------

def test_count_distinct_all_colocated():
    cfg = make_config([(0.0, 0.0)] * 3)
    m, census = count_distinct(cfg, TOL)
    assert m == 1
    assert census == {(0.0, 0.0): 3}


def test_count_distinct_eps_clustering():
    cfg = make_config([(0.0, 0.0), (TOL.eps / 2, 0.0)])
    m, _ = count_distinct(cfg, TOL)
    assert m == 1
    # both robots snap to the first-created member's coordinates
    assert cfg.position(1) == (0.0, 0.0)

    cfg2 = make_config([(0.0, 0.0), (3 * TOL.eps, 0.0)])
    assert count_distinct(cfg2, TOL)[0] == 2


def test_configuration_rejects_non_finite():
    with pytest.raises(ModelError):
        make_config([(float("nan"), 0.0)])


# -- frames --------------------------------------------------------------------

def test_to_global_identity_frame():
    f = LocalFrame((0.0, 0.0), 0.0, 1, 1.0)
    assert to_global(f, (3.0, 4.0)) == (3.0, 4.0)


def test_to_global_rotated_frame():
    f = LocalFrame((1.0, 1.0), math.pi, 1, 1.0)
    g = to_global(f, (1.0, 0.0))
    assert dist(g, (0.0, 1.0)) <= 1e-12


def test_frame_scale_and_handedness():
    # observer at origin, frame rotated 90 degrees, unit 2
    for handedness in (1, -1):
        f = LocalFrame((0.0, 0.0), math.pi / 2, handedness, 2.0)
        local = f.to_local((1.0, 0.0))
        assert abs(local[0]) <= 1e-12
        assert abs(abs(local[1]) - 0.5) <= 1e-12
        assert dist(f.to_global(local), (1.0, 0.0)) <= 1e-12
    plus = LocalFrame((0.0, 0.0), math.pi / 2, 1, 2.0).to_local((1.0, 0.0))
    minus = LocalFrame((0.0, 0.0), math.pi / 2, -1, 2.0).to_local((1.0, 0.0))
    assert abs(plus[1] + minus[1]) <= 1e-12  # handedness flips the lateral axis


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_frame_round_trip(seed):
    rng = random.Random(seed)
    f = LocalFrame(
        (rng.uniform(-5, 5), rng.uniform(-5, 5)),
        rng.uniform(0, 2 * math.pi),
        rng.choice((1, -1)),
        rng.uniform(0.1, 10.0),
    )
    p = (rng.uniform(-5, 5), rng.uniform(-5, 5))
    assert dist(f.to_global(f.to_local(p)), p) <= 1e-9


# -- snapshots -------------------------------------------------------------------

def test_snapshot_weak_detection_bits():
    cfg = make_config([(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)])
    frame = frame_at(FrameSpec(), cfg.position(0))
    snap = take_snapshot(cfg, 0, frame, True, TOL)
    assert len(snap.points) == 2
    bits = dict(zip(snap.points, snap.multiplicity_bits))
    assert bits[(0.0, 0.0)] is True
    assert bits[(1.0, 0.0)] is False
    assert snap.self_point == (0.0, 0.0)


def test_snapshot_without_detection_has_no_bits():
    cfg = make_config([(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)])
    frame = frame_at(FrameSpec(), cfg.position(0))
    snap = take_snapshot(cfg, 0, frame, False, TOL)
    assert snap.multiplicity_bits is None


def test_snapshot_anonymity_under_relabeling():
    rng = random.Random(4)
    pts = [(rng.random(), rng.random()) for _ in range(6)]
    cfg_a = Configuration(dict(enumerate(pts)), TOL)
    relabeled = {5 - i: p for i, p in enumerate(pts)}
    cfg_b = Configuration(relabeled, TOL)
    frame_spec = FrameSpec(rotation=0.7, handedness=-1, unit=1.4)
    robot_a = 0
    robot_b = next(r for r, p in relabeled.items() if p == pts[0])
    snap_a = take_snapshot(cfg_a, robot_a, frame_at(frame_spec, pts[0]), True, TOL)
    snap_b = take_snapshot(cfg_b, robot_b, frame_at(frame_spec, pts[0]), True, TOL)
    assert snap_a == snap_b


def test_snapshot_unknown_robot():
    cfg = make_config([(0.0, 0.0)])
    with pytest.raises(ModelError):
        take_snapshot(cfg, 99, frame_at(FrameSpec(), (0, 0)), False, TOL)


# -- moves ------------------------------------------------------------------------

def test_apply_move_short_hop_completes():
    cfg = make_config([(0.0, 0.0), (1.0, 0.0)])
    new, out = apply_move(cfg, 0, (0.05, 0.0), 0.05, 0.1, TOL)
    assert out.actual == (0.05, 0.0)
    assert not out.truncated


def test_apply_move_truncated_to_delta():
    cfg = make_config([(0.0, 0.0), (1.0, 0.0)])
    new, out = apply_move(cfg, 0, (0.5, 0.0), 0.1, 0.1, TOL)
    assert dist(out.actual, (0.1, 0.0)) <= 1e-12
    assert out.truncated
    # actual lies on the segment and respects the delta floor
    assert out.actual[1] == 0.0
    assert 0.1 - 1e-12 <= dist((0.0, 0.0), out.actual) <= 0.5


def test_apply_move_stationary():
    cfg = make_config([(0.3, 0.3), (1.0, 0.0)])
    _, out = apply_move(cfg, 0, (0.3, 0.3), 0.0, 0.1, TOL)
    assert out.actual == (0.3, 0.3)
    assert not out.truncated


def test_apply_move_contract_violation():
    cfg = make_config([(0.0, 0.0), (1.0, 0.0)])
    with pytest.raises(AdversaryContractError):
        apply_move(cfg, 0, (1.0, 0.0), 0.01, 0.1, TOL)  # below the delta floor


def test_apply_move_q_changes_by_at_most_one():
    rng = random.Random(8)
    for _ in range(100):
        pts = [(rng.randint(0, 2) * 0.5, rng.randint(0, 2) * 0.5)
               for _ in range(6)]
        cfg = make_config(pts)
        before = len(cfg.distinct_points)
        robot = rng.randrange(6)
        target = (rng.randint(0, 2) * 0.5, rng.randint(0, 2) * 0.5)
        d = dist(cfg.position(robot), target)
        new, _ = apply_move(cfg, robot, target, d, 10.0, TOL)
        after = len(new.distinct_points)
        assert abs(after - before) <= 1


def test_apply_move_snaps_to_existing_cluster():
    cfg = make_config([(0.0, 0.0), (1.0, 0.0)])
    new, out = apply_move(cfg, 0, (1.0 + TOL.eps / 3, 0.0), 1.0 + TOL.eps / 3,
                          10.0, TOL)
    assert new.position(0) == (1.0, 0.0)
    assert len(new.distinct_points) == 1
