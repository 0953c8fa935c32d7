import math
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import fig1_pattern, polar, random_distinct_points
from oblot.geometry import (
    Circle,
    GeometryError,
    Tolerance,
    angle_sequence,
    build_s_prime,
    circular_decomposition,
    co_radial,
    dist,
    is_similar,
    leader_angular_sequence,
    on_boundary,
    pattern_sequences,
    radiangular_distance,
    segment_contains,
    smallest_enclosing_circle,
    smallest_ray_gap,
    sweep,
)

TOL = Tolerance(1e-9)


def similarity(scale=1.0, angle=0.0, reflect=False, shift=(0.0, 0.0)):
    def apply(p):
        x, y = p
        if reflect:
            y = -y
        c, s = math.cos(angle), math.sin(angle)
        return (scale * (x * c - y * s) + shift[0],
                scale * (x * s + y * c) + shift[1])

    return apply


# -- smallest enclosing circle ------------------------------------------------

def test_sec_singleton():
    c = smallest_enclosing_circle([(0.0, 0.0)], TOL)
    assert c.center == (0.0, 0.0) and c.radius == 0.0


def test_sec_two_point_diameter():
    c = smallest_enclosing_circle([(0.0, 0.0), (2.0, 0.0)], TOL)
    assert dist(c.center, (1.0, 0.0)) <= 1e-12
    assert abs(c.radius - 1.0) <= 1e-12


def test_sec_right_triangle_hypotenuse():
    c = smallest_enclosing_circle([(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)], TOL)
    assert dist(c.center, (2.0, 1.5)) <= 1e-9
    assert abs(c.radius - 2.5) <= 1e-9


def test_sec_empty_input_rejected():
    with pytest.raises(GeometryError):
        smallest_enclosing_circle([], TOL)


def test_sec_matches_bruteforce_oracle():
    rng = random.Random(7)
    for _ in range(50):
        pts = [(rng.random(), rng.random()) for _ in range(20)]
        got = smallest_enclosing_circle(pts, TOL)
        _, _, want_r = oracles.sec_bruteforce(pts[:12])
        got12 = smallest_enclosing_circle(pts[:12], TOL)
        assert abs(got12.radius - want_r) <= 1e-9
        assert all(dist(p, got.center) <= got.radius + 1e-9 for p in pts)


def test_sec_supported_by_two_points():
    rng = random.Random(11)
    for _ in range(30):
        pts = [(rng.random(), rng.random()) for _ in range(rng.randint(2, 10))]
        c = smallest_enclosing_circle(pts, TOL)
        support = [p for p in pts if on_boundary(p, c, TOL)]
        assert len(support) >= 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_sec_similarity_equivariance(seed):
    rng = random.Random(seed)
    pts = [(rng.random(), rng.random()) for _ in range(rng.randint(2, 9))]
    scale = rng.uniform(0.2, 5.0)
    t = similarity(scale=scale, angle=rng.uniform(0, 2 * math.pi),
                   reflect=rng.random() < 0.5,
                   shift=(rng.uniform(-3, 3), rng.uniform(-3, 3)))
    a = smallest_enclosing_circle(pts, TOL)
    b = smallest_enclosing_circle([t(p) for p in pts], TOL)
    assert abs(b.radius - scale * a.radius) <= 1e-7
    assert dist(b.center, t(a.center)) <= 1e-7


# -- boundary and co-radial predicates ---------------------------------------

def test_on_boundary_cases():
    c = Circle((0.0, 0.0), 1.0)
    assert on_boundary((1.0, 0.0), c, TOL)
    assert not on_boundary((0.0, 0.0), c, TOL)
    assert on_boundary((1.0 + TOL.eps / 2, 0.0), c, TOL)


def test_co_radial_cases():
    assert co_radial((3.0, 0.0), (1.0, 0.0), (0.0, 0.0), TOL)
    assert not co_radial((3.0, 0.0), (-1.0, 0.0), (0.0, 0.0), TOL)
    a = TOL.angular / 2
    assert co_radial((1.0, 0.0), (math.cos(a), math.sin(a)), (0.0, 0.0), TOL)
    # the exact center lies on every radius
    assert co_radial((0.0, 0.0), (1.0, 1.0), (0.0, 0.0), TOL)


# -- S' construction ----------------------------------------------------------

def test_build_s_prime_too_small():
    # (2,0) and (1,0) share a ray, so only two representatives survive.
    sec = Circle((0.0, 0.0), 2.0)
    got = build_s_prime([(2, 0), (1, 0), (0, 2)], None, sec, TOL)
    assert got is None


def test_build_s_prime_robot_beats_pattern():
    robots = [(2.0, 0.0), (0.0, 2.0), (-2.0, 0.0)]
    pattern = [(1.0, 0.0), (0.0, 2.0), (-2.0, 0.0)]
    sec = smallest_enclosing_circle(robots, TOL)
    got = build_s_prime(robots, pattern, sec, TOL)
    assert got is not None
    assert all(tag == "robot" for _, tag in got)
    assert sorted(p for p, _ in got) == sorted(robots)


def test_build_s_prime_matches_ray_grouping_oracle():
    rng = random.Random(3)
    for _ in range(25):
        rays = [rng.uniform(0, 2 * math.pi) for _ in range(rng.randint(3, 6))]
        tagged = []
        for ray in rays:
            for _ in range(rng.randint(1, 3)):
                r = rng.uniform(0.2, 1.0)
                tag = "robot" if rng.random() < 0.6 else "pattern"
                tagged.append(((r * math.cos(ray), r * math.sin(ray)), tag))
        robots = [p for p, t in tagged if t == "robot"]
        pattern = [p for p, t in tagged if t == "pattern"]
        sec = Circle((0.0, 0.0), 1.0)
        got = build_s_prime(robots, pattern, sec, TOL)
        want = oracles.ray_group_representatives(tagged, (0.0, 0.0), TOL.angular)
        if got is None:
            assert len(want) < 3
            continue
        assert [(p, t) for p, t in got] == [(p, t) for p, t in want]


# -- angle sequences ----------------------------------------------------------

def test_angle_sequence_square_symmetric():
    square = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    seq = angle_sequence(square, (0.0, 0.0), (1, 0), 1)
    assert all(abs(a - math.pi / 2) <= 1e-12 for a in seq.angles)


def test_angle_sequence_three_points():
    pts = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)]
    seq = angle_sequence(pts, (0.0, 0.0), (1.0, 0.0), 1)
    assert [round(a, 12) for a in seq.angles] == [
        round(math.pi / 2, 12), round(math.pi / 2, 12), round(math.pi, 12)
    ]


def test_angle_sequence_rotation_is_cyclic():
    rng = random.Random(5)
    pts = [polar(rng.uniform(0.3, 1.0), rng.uniform(0, 360)) for _ in range(8)]
    base = angle_sequence(pts, (0, 0), pts[0], 1)
    for start in pts:
        s = angle_sequence(pts, (0, 0), start, 1)
        i = base.points.index(start)
        rotated = base.angles[i:] + base.angles[:i]
        assert all(abs(a - b) <= 1e-12 for a, b in zip(s.angles, rotated))


def test_angle_sequence_matches_polar_sort_oracle():
    rng = random.Random(9)
    for _ in range(20):
        pts = [polar(rng.uniform(0.2, 1.0), rng.uniform(0, 360))
               for _ in range(10)]
        direction = rng.choice((1, -1))
        seq = angle_sequence(pts, (0, 0), pts[0], direction)
        want = oracles.polar_sort(pts, (0, 0), pts[0], direction)
        assert list(seq.points) == want


def test_angle_sequence_sum_two_pi():
    rng = random.Random(13)
    pts = [polar(rng.uniform(0.2, 1.0), rng.uniform(0, 360)) for _ in range(7)]
    seq = angle_sequence(pts, (0, 0), pts[0], -1)
    assert abs(sum(seq.angles) - 2 * math.pi) <= 1e-9


# -- leader angular sequence --------------------------------------------------

def test_leader_sequence_symmetric_square_none():
    assert leader_angular_sequence(
        [(1, 0), (0, 1), (-1, 0), (0, -1)], None, TOL) is None


def test_leader_sequence_interior_point():
    pts = [(1, 0), (0, 1), (-1, 0), (0, -1), polar(0.5, 80)]
    lam = leader_angular_sequence(pts, None, TOL)
    assert lam is not None
    assert abs(lam.theta1 - math.radians(10)) <= 1e-9
    assert lam.inner_point == polar(0.5, 80)
    assert lam.boundary_point == (0, 1)


def test_leader_sequence_two_boundary_points_none():
    pts = [(1, 0), polar(1.0, 5), (0, 1), (-1, 0), (0, -1)]
    assert leader_angular_sequence(pts, None, TOL) is None


def test_leader_sequence_similarity_invariant():
    rng = random.Random(23)
    base = [(1, 0), (0, 1), (-1, 0), (0, -1), polar(0.5, 80)]
    for _ in range(50):
        t = similarity(scale=rng.uniform(0.2, 4.0),
                       angle=rng.uniform(0, 2 * math.pi),
                       shift=(rng.uniform(-5, 5), rng.uniform(-5, 5)))
        lam = leader_angular_sequence([t(p) for p in base], None, TOL)
        assert lam is not None
        assert dist(lam.inner_point, t(polar(0.5, 80))) <= 1e-7
        assert dist(lam.boundary_point, t((0, 1))) <= 1e-7
        assert abs(lam.theta1 - math.radians(10)) <= 1e-7


# -- radiangular distance ------------------------------------------------------

def test_radiangular_co_radial():
    assert radiangular_distance((3, 0), (1, 0), (0, 0), 1, TOL) == (0.0, 2.0)


def test_radiangular_through_center():
    theta, length = radiangular_distance((2, 0), (0, 1), (0, 0), 1, TOL)
    assert abs(theta - math.pi / 2) <= 1e-12
    assert abs(length - 3.0) <= 1e-12


def test_radiangular_same_point():
    assert radiangular_distance((1, 1), (1, 1), (0, 0), -1, TOL) == (0.0, 0.0)


def test_radiangular_order_is_strict_weak():
    rng = random.Random(31)
    anchor = (1.0, 0.0)
    for _ in range(20):
        pts = [polar(rng.uniform(0.2, 0.99), rng.uniform(1, 359))
               for _ in range(8)]
        keys = {p: radiangular_distance(anchor, p, (0, 0), -1, TOL) for p in pts}
        ordered = sorted(pts, key=lambda p: keys[p])
        for i in range(len(ordered)):
            for j in range(i + 1, len(ordered)):
                assert keys[ordered[i]] <= keys[ordered[j]]
                for k in range(j + 1, len(ordered)):
                    if keys[ordered[i]] < keys[ordered[j]] and \
                       keys[ordered[j]] < keys[ordered[k]]:
                        assert keys[ordered[i]] < keys[ordered[k]]


# -- pattern sequences ----------------------------------------------------------

def test_pattern_sequences_regular_pentagon_fully_symmetric():
    pent = [polar(1.0, 90 + 72 * i) for i in range(5)]
    prof = pattern_sequences(pent, TOL)
    assert len(prof.sequences) == 10
    assert len(prof.achieving) == 10


def test_pattern_sequences_asymmetric_unique_minimum():
    pts = [polar(1.0, a) for a in (0, 90, 180, 270)] + [polar(0.5, 40)]
    prof = pattern_sequences(pts, TOL)
    assert len(prof.achieving) == 1
    seqs = oracles.all_pattern_sequences(pts, TOL.eps)
    want = oracles.lex_min_sequence(seqs, TOL.eps)
    got = [tuple(t) for t in prof.mu_hat.triples]
    assert all(
        abs(a - b) <= 1e-9 for ta, tb in zip(got, want) for a, b in zip(ta, tb)
    )


def test_pattern_sequences_match_exhaustive_oracle_random():
    rng = random.Random(17)
    for _ in range(25):
        pts = random_distinct_points(rng, rng.randint(5, 9))
        prof = pattern_sequences(pts, TOL)
        seqs = oracles.all_pattern_sequences(pts, TOL.eps)
        want = oracles.lex_min_sequence(seqs, TOL.eps)
        got = prof.mu_hat.triples
        assert len(got) == len(want)
        assert all(
            abs(a - b) <= 1e-9
            for ta, tb in zip(got, want) for a, b in zip(ta, tb)
        )


def test_pattern_sequences_nine_point_figure():
    # Canonical description of the three-circle nine-point example: angles
    # 0,45,45,45,45,45,30,15,90 degrees with radii 1, 1/3, 1/6 of the SEC.
    prof = pattern_sequences(fig1_pattern(), TOL)
    want = [
        (0.0, 1 / 3, 1.0),
        (45.0, 1.0, 1 / 6),
        (45.0, 1 / 6, 1.0),
        (45.0, 1.0, 1 / 3),
        (45.0, 1 / 3, 1.0),
        (45.0, 1.0, 1 / 6),
        (30.0, 1 / 6, 1 / 3),
        (15.0, 1 / 3, 1.0),
        (90.0, 1.0, 1 / 3),
    ]
    got = [(math.degrees(t[0]), t[1], t[2]) for t in prof.mu_hat.triples]
    for (ga, g1, g2), (wa, w1, w2) in zip(got, want):
        assert abs(ga - wa) <= 1e-7
        assert abs(g1 - w1) <= 1e-9
        assert abs(g2 - w2) <= 1e-9
    assert len(prof.achieving) == 1


def test_pattern_sequences_reflection_keeps_minimum():
    rng = random.Random(41)
    for _ in range(10):
        pts = random_distinct_points(rng, 7)
        reflected = [(x, -y) for x, y in pts]
        a = pattern_sequences(pts, TOL).mu_hat
        b = pattern_sequences(reflected, TOL).mu_hat
        assert a.direction != b.direction or a.direction in ("cw", "ccw")
        assert all(
            abs(x - y) <= 1e-9
            for ta, tb in zip(a.triples, b.triples) for x, y in zip(ta, tb)
        )


def test_pattern_sequences_scale_invariance():
    rng = random.Random(43)
    pts = random_distinct_points(rng, 6)
    t = similarity(scale=3.7, angle=1.1, shift=(2, -1))
    a = pattern_sequences(pts, TOL).mu_hat
    b = pattern_sequences([t(p) for p in pts], TOL).mu_hat
    # normalized radii: distances already divided by the SEC radius
    assert all(
        abs(x - y) <= 1e-7
        for ta, tb in zip(a.triples, b.triples) for x, y in zip(ta, tb)
    )


def test_pattern_sequences_too_small():
    with pytest.raises(GeometryError):
        pattern_sequences([(0, 0), (1, 0)], TOL)


# -- circular decomposition -----------------------------------------------------

def test_circular_decomposition_single_circle():
    pts = [polar(1.0, a) for a in (0, 50, 120, 200, 300)]
    cd = circular_decomposition(pts, TOL)
    assert len(cd.circles) == 1


def test_circular_decomposition_figure_radii():
    cd = circular_decomposition(fig1_pattern(), TOL)
    radii = [c.radius for c in cd.circles]
    assert len(radii) == 3
    assert abs(radii[0] - 3.0) <= 1e-9
    assert abs(radii[1] - 1.0) <= 1e-9
    assert abs(radii[2] - 0.5) <= 1e-9


def test_circular_decomposition_center_point():
    pts = [polar(1.0, a) for a in (10, 130, 250)] + [(0.0, 0.0)]
    cd = circular_decomposition(pts, TOL)
    assert cd.circles[-1].radius <= TOL.eps


# -- similarity ------------------------------------------------------------------

def test_is_similar_identity():
    pts = [(0, 0), (1, 0), (0.3, 0.9), (0.8, 0.5), (0.1, 0.4)]
    assert is_similar(pts, pts, TOL)


def test_is_similar_full_similarity():
    pts = [(0, 0), (1, 0), (0.3, 0.9), (0.8, 0.5), (0.1, 0.4)]
    t = similarity(scale=3.0, angle=math.radians(37), reflect=True,
                   shift=(5.0, -2.0))
    assert is_similar([t(p) for p in pts], pts, TOL)


def test_is_similar_detects_displacement():
    pts = [(0, 0), (1, 0), (0.3, 0.9), (0.8, 0.5), (0.1, 0.4)]
    rho = smallest_enclosing_circle(pts, TOL).radius
    moved = list(pts)
    moved[2] = (moved[2][0] + 10 * TOL.eps * rho, moved[2][1])
    assert not is_similar(moved, pts, TOL)


def test_is_similar_size_mismatch():
    assert not is_similar([(0, 0), (1, 0)], [(0, 0), (1, 0), (2, 0)], TOL)


def test_is_similar_random_transforms():
    rng = random.Random(311)
    pts = random_distinct_points(rng, 6)
    for _ in range(200):
        t = similarity(scale=rng.uniform(0.1, 8.0),
                       angle=rng.uniform(0, 2 * math.pi),
                       reflect=rng.random() < 0.5,
                       shift=(rng.uniform(-9, 9), rng.uniform(-9, 9)))
        assert is_similar([t(p) for p in pts], pts, TOL)


# -- helpers ----------------------------------------------------------------------

def test_segment_contains():
    assert segment_contains((0.5, 0.0), (0, 0), (1, 0), TOL)
    assert not segment_contains((0.0, 0.0), (0, 0), (1, 0), TOL)
    assert segment_contains((0.0, 0.0), (0, 0), (1, 0), TOL, include_a=True)
    assert not segment_contains((0.5, 0.1), (0, 0), (1, 0), TOL)


def test_smallest_ray_gap():
    pts = [polar(1.0, a) for a in (0, 90, 100)]
    assert abs(smallest_ray_gap(pts, (0, 0), TOL) - math.radians(10)) <= 1e-9
    assert smallest_ray_gap([(1.0, 0.0)], (0, 0), TOL) == 2 * math.pi


def test_sweep_directions():
    assert abs(sweep(0.0, math.pi / 2, 1) - math.pi / 2) <= 1e-12
    assert abs(sweep(0.0, math.pi / 2, -1) - 3 * math.pi / 2) <= 1e-12
