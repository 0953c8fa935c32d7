import math
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oblot.geometry import Tolerance  # noqa: E402
from oblot.scenarios import RandomFrames, Scenario  # noqa: E402
from oblot.schedulers import ActivationSpec, MovementSpec  # noqa: E402


@pytest.fixture
def tol():
    return Tolerance(1e-9)


def polar(r, deg):
    a = math.radians(deg)
    return (r * math.cos(a), r * math.sin(a))


def fig1_pattern():
    """The nine-point three-circle pattern from the worked example figures."""
    spec = [(1, 45), (3, 45), (0.5, 0), (3, 315), (1, 270),
            (3, 225), (0.5, 180), (1, 150), (3, 135)]
    return [polar(r, a) for r, a in spec]


def random_distinct_points(rng, k, spread=1.0, min_sep=1e-3):
    pts = []
    while len(pts) < k:
        p = (rng.uniform(-spread, spread), rng.uniform(-spread, spread))
        if all(math.hypot(p[0] - q[0], p[1] - q[1]) > min_sep for q in pts):
            pts.append(p)
    return pts


def random_scenario(seed, *, k_range=(5, 10), n_range=(5, 20),
                    algorithm="seq-pf", activation_kinds=("seq-round-robin",
                                                          "seq-random"),
                    delta_ratio=0.05, weak_detection=False,
                    allow_understaffed_start=True, unit_range=(0.3, 1.5)):
    """Randomized scenario in the style of the verification campaigns:
    random multiplicities in the start, random private frames, worst-case
    truncation with delta tied to the initial enclosing radius."""
    rng = random.Random(seed)
    k = rng.randint(*k_range)
    n = rng.randint(max(n_range[0], k), max(n_range[1], k))
    pattern = random_distinct_points(rng, k)
    if allow_understaffed_start and rng.random() < 0.3:
        m = rng.randint(2, max(2, k - 1))
    else:
        m = rng.randint(min(n, k), n)
    distinct = random_distinct_points(rng, m)
    robots = list(distinct)
    robots += [distinct[rng.randrange(m)] for _ in range(n - m)]
    rng.shuffle(robots)
    from oblot.geometry import smallest_enclosing_circle
    rho0 = max(1e-3, smallest_enclosing_circle(robots, Tolerance(1e-9)).radius)
    return Scenario(
        robots=tuple(robots),
        pattern=tuple(pattern),
        algorithm=algorithm,
        activation=ActivationSpec(kind=rng.choice(list(activation_kinds)),
                                  seed=rng.randrange(2 ** 31)),
        movement=MovementSpec(kind="worst-case-delta", delta=rho0 * delta_ratio),
        frames=RandomFrames(unit_range=unit_range),
        weak_detection=weak_detection,
        eps=1e-9,
        max_rounds=None,
        seed=rng.randrange(2 ** 31),
    )
