import random

import numpy as np
import pytest

import oracles
from oblot import _kernels
from oblot._kernels import cluster_owners, smallest_circle_xy


def test_smallest_circle_matches_bruteforce():
    rng = random.Random(1)
    for _ in range(100):
        pts = [(rng.random(), rng.random()) for _ in range(rng.randint(1, 12))]
        cx, cy, r = smallest_circle_xy(np.asarray(pts))
        _, _, want = oracles.sec_bruteforce(pts)
        assert abs(r - want) <= 1e-9


def test_pure_python_path_agrees_with_selected_kernel():
    rng = random.Random(2)
    for _ in range(50):
        pts = np.asarray([(rng.random(), rng.random()) for _ in range(10)])
        sel = smallest_circle_xy(pts)
        ref = _kernels._sec_impl(pts[:, 0].copy(), pts[:, 1].copy())
        assert all(abs(a - b) <= 1e-12 for a, b in zip(sel, ref))


def test_cluster_owners_first_member_wins():
    pts = np.asarray([[0.0, 0.0], [1.0, 0.0], [0.0, 1e-10], [1.0, 1e-10]])
    owners = cluster_owners(pts, 1e-9)
    assert list(owners) == [0, 1, 0, 1]


def test_cluster_owners_no_chaining():
    # a-b and b-c within eps but a-c not: c joins b's cluster root, which is a,
    # only if c is within eps of a itself
    eps = 1e-3
    pts = np.asarray([[0.0, 0.0], [0.0009, 0.0], [0.0018, 0.0]])
    owners = cluster_owners(pts, eps)
    assert owners[1] == 0
    assert owners[2] == 1 or owners[2] == 2
    # distance from point 2 to root 0 exceeds eps, so it must not join root 0
    assert owners[2] != 0


def test_smallest_circle_rejects_bad_shapes():
    with pytest.raises(ValueError):
        smallest_circle_xy(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        smallest_circle_xy(np.zeros((3, 3)))
