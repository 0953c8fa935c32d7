import random

import pytest
from hypothesis import given, settings, strategies as st

from oblot.geometry import dist
from oblot.schedulers import (
    ActivationPolicy,
    ActivationSpec,
    FairnessLedger,
    MovementPolicy,
    MovementSpec,
    SchedulerError,
)

ROBOTS = (0, 1, 2)


def make(kind, **kw):
    spec = ActivationSpec(kind=kind, **kw)
    policy = ActivationPolicy(spec, ROBOTS)
    ledger = FairnessLedger(ROBOTS, policy.window)
    return policy, ledger


def drive(policy, ledger, rounds):
    out = []
    for r in range(1, rounds + 1):
        acts = policy.next_activation(r, ledger)
        ledger.record(acts, r)
        out.append(acts)
    return out


# -- cardinality laws -----------------------------------------------------------

def test_fsync_activates_everyone():
    policy, ledger = make("fsync")
    for acts in drive(policy, ledger, 50):
        assert sorted(acts) == list(ROBOTS)


def test_seq_round_robin_cycles():
    policy, ledger = make("seq-round-robin")
    acts = drive(policy, ledger, 7)
    assert [a[0] for a in acts] == [0, 1, 2, 0, 1, 2, 0]


def test_seq_random_single_and_fair():
    policy, ledger = make("seq-random", seed=1, window=10)
    gaps = {r: [] for r in ROBOTS}
    last = {r: 0 for r in ROBOTS}
    for i, acts in enumerate(drive(policy, ledger, 5000), 1):
        assert len(acts) == 1
        r = acts[0]
        gaps[r].append(i - last[r])
        last[r] = i
    assert all(max(g) <= 10 for g in gaps.values())


def test_ssync_random_nonempty_and_fair():
    policy, ledger = make("ssync-random", seed=2, window=12)
    last = {r: 0 for r in ROBOTS}
    for i, acts in enumerate(drive(policy, ledger, 5000), 1):
        assert 1 <= len(acts) <= len(ROBOTS)
        assert acts == sorted(set(acts))
        for r in acts:
            last[r] = i
        assert all(i - v <= 12 for v in last.values())


def test_scripted_falls_back_to_round_robin():
    policy, ledger = make("scripted", script=(2, 2, 0))
    acts = drive(policy, ledger, 6)
    assert [a[0] for a in acts] == [2, 2, 0, 0, 1, 2]


def test_scripted_needs_script():
    with pytest.raises(SchedulerError):
        ActivationSpec(kind="scripted")


def test_fairness_forcing_starved_robot():
    policy, ledger = make("seq-random", seed=3, window=10)
    # artificially starve robot 2
    ledger.last_activation[2] = -10
    acts = policy.next_activation(1, ledger)
    assert acts == [2]


# -- determinism ------------------------------------------------------------------

def test_activation_stream_determinism():
    a1, l1 = make("seq-random", seed=42)
    a2, l2 = make("seq-random", seed=42)
    assert drive(a1, l1, 500) == drive(a2, l2, 500)


def test_truncation_stream_determinism():
    m1 = MovementPolicy(MovementSpec(kind="random", delta=0.1, seed=9))
    m2 = MovementPolicy(MovementSpec(kind="random", delta=0.1, seed=9))
    pts = [((0.0, 0.0), (float(i), 1.0)) for i in range(1, 100)]
    s1 = [m1.decide_truncation(a, b) for a, b in pts]
    s2 = [m2.decide_truncation(a, b) for a, b in pts]
    assert s1 == s2


# -- truncation interval -------------------------------------------------------------

def test_rigid_reaches():
    m = MovementPolicy(MovementSpec(kind="rigid", delta=0.1))
    assert m.decide_truncation((0, 0), (3, 4)) == 5.0


def test_worst_case_delta_floor():
    m = MovementPolicy(MovementSpec(kind="worst-case-delta", delta=0.1))
    assert m.decide_truncation((0, 0), (0.7, 0.0)) == 0.1
    assert m.decide_truncation((0, 0), (0.05, 0.0)) == 0.05


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_random_truncation_in_interval(seed):
    rng = random.Random(seed)
    m = MovementPolicy(MovementSpec(kind="random", delta=0.1, seed=seed))
    start = (rng.uniform(-2, 2), rng.uniform(-2, 2))
    end = (rng.uniform(-2, 2), rng.uniform(-2, 2))
    d = dist(start, end)
    s = m.decide_truncation(start, end)
    assert min(0.1, d) - 1e-12 <= s <= d + 1e-12


# -- epoch boundaries ------------------------------------------------------------------

def test_epoch_every_round_under_fsync():
    policy, ledger = make("fsync")
    drive(policy, ledger, 20)
    assert ledger.epoch == 20
    assert ledger.epoch_marks == list(range(1, 21))


def test_epoch_every_n_rounds_under_round_robin():
    policy, ledger = make("seq-round-robin")
    drive(policy, ledger, 12)
    assert ledger.epoch_marks == [3, 6, 9, 12]


def test_epoch_for_scripted_sequence():
    # activations 0,0,1,2,... -> first epoch completes at round 4
    ledger = FairnessLedger(ROBOTS, 100)
    for i, r in enumerate([0, 0, 1, 2, 0, 1], 1):
        ledger.record([r], i)
    assert ledger.epoch_marks[0] == 4
