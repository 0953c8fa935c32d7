"""Planar geometry for robot configurations and target patterns.

Everything here is a pure function of its inputs.  Points are plain
``(x, y)`` tuples; angles are radians.  Chirality is encoded as a sweep
sign ``cw_dir``: the "clockwise" direction fixed by a leader angular
sequence corresponds to sweeping standard polar angles by ``cw_dir``
(+1 = mathematically counterclockwise, -1 = mathematically clockwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ._kernels import smallest_circle_xy

Point = tuple[float, float]

TWO_PI = 2.0 * math.pi

ROBOT = "robot"
PATTERN = "pattern"


class GeometryError(ValueError):
    """Raised when an operation is called outside its contract."""


@dataclass(frozen=True)
class Tolerance:
    """Single epsilon for length predicates; angles reuse the same value."""

    eps: float = 1e-9

    def __post_init__(self):
        if not (self.eps > 0.0 and math.isfinite(self.eps)):
            raise GeometryError("eps must be a positive finite real")

    @property
    def angular(self) -> float:
        return self.eps

    def same(self, a: float, b: float) -> bool:
        return abs(a - b) <= self.eps

    def same_point(self, a: Point, b: Point) -> bool:
        return math.hypot(a[0] - b[0], a[1] - b[1]) <= self.eps


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        if self.radius < 0.0 or not math.isfinite(self.radius):
            raise GeometryError("radius must be a nonnegative finite real")


def _check_finite(points: Sequence[Point]):
    for p in points:
        if not (math.isfinite(p[0]) and math.isfinite(p[1])):
            raise GeometryError(f"non-finite coordinate in {p!r}")


def dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def polar_angle(p: Point, center: Point) -> float:
    """Standard angle of p around center, in [0, 2*pi)."""
    a = math.atan2(p[1] - center[1], p[0] - center[0])
    return a % TWO_PI


def sweep(from_angle: float, to_angle: float, cw_dir: int) -> float:
    """Angle swept rotating from one ray to another in the cw_dir sense."""
    return ((to_angle - from_angle) * cw_dir) % TWO_PI


def smallest_enclosing_circle(points: Sequence[Point], tol: Tolerance) -> Circle:
    """Smallest circle containing all points; deterministic per input order."""
    if len(points) == 0:
        raise GeometryError("smallest_enclosing_circle needs at least one point")
    _check_finite(points)
    if len(points) == 1:
        return Circle((float(points[0][0]), float(points[0][1])), 0.0)
    cx, cy, r = smallest_circle_xy(np.asarray(points, dtype=np.float64))
    return Circle((cx, cy), r)


def on_boundary(p: Point, c: Circle, tol: Tolerance) -> bool:
    return abs(dist(p, c.center) - c.radius) <= tol.eps


def co_radial(a: Point, b: Point, center: Point, tol: Tolerance) -> bool:
    """True when a and b lie on one ray from center.

    A point within eps of the center lies on every radius, so it is
    co-radial with everything; this keeps the S' construction total when
    a robot occupies the center exactly.
    """
    da = dist(a, center)
    db = dist(b, center)
    if da <= tol.eps or db <= tol.eps:
        return True
    ux, uy = a[0] - center[0], a[1] - center[1]
    vx, vy = b[0] - center[0], b[1] - center[1]
    cross = ux * vy - uy * vx
    dot = ux * vx + uy * vy
    return math.atan2(abs(cross), dot) <= tol.angular


class RayGroup(NamedTuple):
    """Points of one ray from the center, ordered innermost first."""

    angle: float                      # angle of the most external member
    members: tuple[tuple[Point, str], ...]

    @property
    def outer(self) -> tuple[Point, str]:
        return self.members[-1]


def ray_groups(
    tagged_points: Sequence[tuple[Point, str]], center: Point, tol: Tolerance
) -> list[RayGroup]:
    """Group points by the ray from center they lie on.

    Points within eps of the center have no ray and are dropped.  Groups
    come back sorted by increasing standard angle of their outermost
    member; members are sorted by increasing distance from the center.
    """
    cx, cy = center
    eps = tol.eps
    ang_eps = tol.angular
    hypot = math.hypot
    atan2 = math.atan2
    entries = []
    for p, tag in tagged_points:
        dx = p[0] - cx
        dy = p[1] - cy
        r = hypot(dx, dy)
        if r <= eps:
            continue
        entries.append((atan2(dy, dx) % TWO_PI, r, p, tag))
    if not entries:
        return []
    entries.sort()
    clusters: list[list] = [[entries[0]]]
    for e in entries[1:]:
        if e[0] - clusters[-1][-1][0] <= ang_eps:
            clusters[-1].append(e)
        else:
            clusters.append([e])
    # Wrap-around: last cluster may be the same ray as the first.
    if len(clusters) > 1:
        gap = entries[0][0] + TWO_PI - clusters[-1][-1][0]
        if gap <= ang_eps:
            clusters[0] = clusters.pop() + clusters[0]
    groups = []
    for cluster in clusters:
        cluster.sort(key=_radius_then_point)
        outer_angle = cluster[-1][0]
        groups.append(
            RayGroup(outer_angle, tuple((e[2], e[3]) for e in cluster))
        )
    groups.sort()
    return groups


def _radius_then_point(e):
    return (e[1], e[2])


def build_s_prime(
    robot_points: Sequence[Point],
    pattern_points: Optional[Sequence[Point]],
    sec: Circle,
    tol: Tolerance,
) -> Optional[list[tuple[Point, str]]]:
    """Per-ray representatives: most external robot, else pattern point.

    Returns None ("sequence undefined") when fewer than 3 rays survive.
    Output is ordered by increasing standard angle around the center.
    """
    tagged = [(p, ROBOT) for p in robot_points]
    if pattern_points:
        tagged += [(p, PATTERN) for p in pattern_points]
    reps = []
    for group in ray_groups(tagged, sec.center, tol):
        robots = [(p, t) for p, t in group.members if t == ROBOT]
        chosen = robots[-1] if robots else group.members[-1]
        reps.append(chosen)
    if len(reps) < 3:
        return None
    return reps


@dataclass(frozen=True)
class AngleSequence:
    """Cyclic sequence of non-co-radial points with consecutive central angles."""

    points: tuple[Point, ...]
    angles: tuple[float, ...]
    direction: int  # sweep sign from each point to its successor


def angle_sequence(
    s_prime: Sequence[Point], center: Point, start: Point, direction: int
) -> AngleSequence:
    """Order s_prime around center from start, sweeping by direction."""
    if len(s_prime) <= 2:
        raise GeometryError("angle sequence needs more than 2 points")
    if direction not in (1, -1):
        raise GeometryError("direction must be +1 or -1")
    if start not in s_prime:
        raise GeometryError("start must be one of the sequence points")
    start_angle = polar_angle(start, center)
    decorated = sorted(
        ((sweep(start_angle, polar_angle(p, center), direction), p)
         for p in s_prime),
    )
    keyed = [p for _, p in decorated]
    offsets = [a for a, _ in decorated]
    angles = []
    for i in range(len(keyed)):
        nxt = offsets[(i + 1) % len(keyed)]
        a = (nxt - offsets[i]) % TWO_PI
        angles.append(a)
    if any(a <= 0.0 for a in angles):
        raise GeometryError("co-radial points in angle sequence input")
    return AngleSequence(tuple(keyed), tuple(angles), direction)


@dataclass(frozen=True)
class LeaderAngularSequence:
    """The unique-smallest-angle certificate fixing chirality.

    ``inner_point`` and ``boundary_point`` are the two robot positions
    defining theta_1; sweeping from the inner point's ray to the boundary
    point's ray by ``cw_dir`` spans exactly theta_1, and that direction is
    "clockwise" by convention.
    """

    base: AngleSequence
    theta1_index: int
    theta1: float
    inner_point: Point
    boundary_point: Point
    cw_dir: int
    center: Point
    radius: float


def leader_angular_sequence(
    robot_points: Sequence[Point],
    pattern_points: Optional[Sequence[Point]],
    tol: Tolerance,
    sec: Optional[Circle] = None,
) -> Optional[LeaderAngularSequence]:
    """Leader angular sequence of Q (or of Q overlapped with a pattern)."""
    if sec is None:
        sec = smallest_enclosing_circle(list(robot_points), tol)
    if sec.radius <= tol.eps:
        return None
    s_prime = build_s_prime(robot_points, pattern_points, sec, tol)
    if s_prime is None:
        return None
    pts = [p for p, _ in s_prime]
    tags = [t for _, t in s_prime]
    angles = [polar_angle(p, sec.center) for p in pts]
    order = sorted(range(len(pts)), key=lambda i: angles[i])
    gaps = []
    for idx in range(len(order)):
        i = order[idx]
        j = order[(idx + 1) % len(order)]
        gaps.append((angles[j] - angles[i]) % TWO_PI or TWO_PI)
    smallest = min(gaps)
    ranked = sorted(gaps)
    if len(ranked) > 1 and ranked[1] - ranked[0] <= tol.angular:
        return None  # smallest angle not unique
    k = gaps.index(smallest)
    ia = order[k]                       # lower-angle ray (ccw start)
    ib = order[(k + 1) % len(order)]    # ia's ray + gap, going ccw
    rho = sec.radius

    def is_interior(i):
        return dist(pts[i], sec.center) < rho - tol.eps

    def is_bnd(i):
        return abs(dist(pts[i], sec.center) - rho) <= tol.eps

    inner = boundary = None
    cw_dir = 0
    if tags[ia] == ROBOT and tags[ib] == ROBOT:
        if is_interior(ia) and is_bnd(ib):
            inner, boundary, cw_dir = pts[ia], pts[ib], 1
        elif is_interior(ib) and is_bnd(ia):
            inner, boundary, cw_dir = pts[ib], pts[ia], -1
    if inner is None:
        return None
    # Build the base sequence from the already-sorted ray order: rotate so
    # the inner point leads, sweeping in the leader-clockwise direction.
    start = order.index(ia if cw_dir == 1 else ib)
    if cw_dir == 1:
        cycle = [order[(start + i) % len(order)] for i in range(len(order))]
        cycle_gaps = [gaps[(start + i) % len(order)] for i in range(len(order))]
    else:
        cycle = [order[(start - i) % len(order)] for i in range(len(order))]
        cycle_gaps = [gaps[(start - 1 - i) % len(order)]
                      for i in range(len(order))]
    base = AngleSequence(
        tuple(pts[i] for i in cycle), tuple(cycle_gaps), cw_dir
    )
    return LeaderAngularSequence(
        base=base,
        theta1_index=0,
        theta1=smallest,
        inner_point=inner,
        boundary_point=boundary,
        cw_dir=cw_dir,
        center=sec.center,
        radius=rho,
    )


def radiangular_distance(
    a: Point, b: Point, center: Point, cw_dir: int, tol: Tolerance
) -> tuple[float, float]:
    """(clockwise angle, radial length) between two points.

    Co-radial points measure (0, |ab|); otherwise the angle is the
    directed clockwise sweep from a's ray to b's ray and the length is
    |center a| + |center b| (the radial detour through the center).
    """
    if co_radial(a, b, center, tol):
        return 0.0, dist(a, b)
    theta = sweep(polar_angle(a, center), polar_angle(b, center), cw_dir)
    return theta, dist(a, center) + dist(b, center)


def radial_detour(a: Point, b: Point, center: Point, tol: Tolerance) -> list[Point]:
    """Waypoints of the radial detour from a to b (through the center
    unless the points are co-radial)."""
    if co_radial(a, b, center, tol):
        return [a, b]
    return [a, center, b]


# ---------------------------------------------------------------------------
# Pattern sequences and the canonical description mu-hat
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PatternSequence:
    """One cyclic triple sequence (angle, |O p_i|, |O p_{i+1}|)."""

    triples: tuple[tuple[float, float, float], ...]
    direction: str           # "cw" | "ccw"
    start_index: int
    tour: tuple[Point, ...]  # points in traversal order, starting at start_index


@dataclass(frozen=True)
class PatternProfile:
    """All pattern sequences plus the lexicographic minimum mu-hat.

    Computed on the pattern normalized to SEC center 0 and radius 1, so
    the profile is reusable at any placement scale.  Points within eps of
    the center carry no angle and are kept aside; they ride along with
    any placement.
    """

    normalized: tuple[Point, ...]
    center_points: tuple[Point, ...]
    sequences: tuple[PatternSequence, ...]
    mu_hat: PatternSequence
    achieving: tuple[int, ...]     # indices into sequences eps-equal to mu_hat
    anchor_tour_pos: int           # first on-SEC point in mu-hat's tour
    radii: tuple[float, ...]       # circular decomposition radii, decreasing


def _triple_cmp(a, b, tol: Tolerance) -> int:
    for (x, y) in zip(a, b):
        if abs(x - y) > tol.eps:
            return -1 if x < y else 1
    return 0


def _seq_cmp(sa, sb, tol: Tolerance) -> int:
    for ta, tb in zip(sa, sb):
        c = _triple_cmp(ta, tb, tol)
        if c != 0:
            return c
    return 0


def _tour(groups: list[RayGroup], direction: str) -> list[tuple[Point, float, float]]:
    """Flatten ray groups into a tour: rays in the direction order, each
    ray traversed innermost to outermost."""
    ordered = groups if direction == "ccw" else list(reversed(groups))
    out = []
    for g in ordered:
        for p, _tag in g.members:
            out.append((p, g.angle, math.hypot(p[0], p[1])))
    return out


def _tour_triples(tour, direction):
    sign = 1 if direction == "ccw" else -1
    triples = []
    n = len(tour)
    for i in range(n):
        p, ang, r = tour[i]
        q, ang2, r2 = tour[(i + 1) % n]
        gap = ((ang2 - ang) * sign) % TWO_PI if abs(ang2 - ang) > 0 else 0.0
        if gap >= TWO_PI:
            gap = 0.0
        triples.append((gap, r, r2))
    return triples


def pattern_sequences(pattern: Sequence[Point], tol: Tolerance) -> PatternProfile:
    """All clockwise/counterclockwise pattern sequences and their minimum."""
    return _pattern_profile(tuple((float(x), float(y)) for x, y in pattern), tol.eps)


@lru_cache(maxsize=256)
def _pattern_profile(pattern: tuple[Point, ...], eps: float) -> PatternProfile:
    tol = Tolerance(eps)
    if len(pattern) < 3:
        raise GeometryError("pattern sequences need at least 3 points")
    _check_finite(pattern)
    sec = smallest_enclosing_circle(pattern, tol)
    if sec.radius <= tol.eps:
        raise GeometryError("pattern sequences undefined for a single location")
    cx, cy = sec.center
    norm = tuple(
        ((p[0] - cx) / sec.radius, (p[1] - cy) / sec.radius) for p in pattern
    )
    center_pts = tuple(p for p in norm if math.hypot(*p) <= tol.eps)
    angular = [p for p in norm if math.hypot(*p) > tol.eps]
    if len(angular) < 3:
        raise GeometryError("pattern sequences need at least 3 non-central points")
    groups = ray_groups([(p, PATTERN) for p in angular], (0.0, 0.0), tol)

    sequences = []
    for direction in ("cw", "ccw"):
        tour = _tour(groups, direction)
        base_triples = _tour_triples(tour, direction)
        n = len(tour)
        for start in range(n):
            rotated = tuple(base_triples[(start + i) % n] for i in range(n))
            rotated_tour = tuple(tour[(start + i) % n][0] for i in range(n))
            sequences.append(
                PatternSequence(rotated, direction, start, rotated_tour)
            )
    best = sequences[0]
    for s in sequences[1:]:
        if _seq_cmp(s.triples, best.triples, tol) < 0:
            best = s
    achieving = tuple(
        i for i, s in enumerate(sequences)
        if _seq_cmp(s.triples, best.triples, tol) == 0
    )
    mu_hat = sequences[achieving[0]]
    anchor_pos = next(
        i for i, p in enumerate(mu_hat.tour)
        if abs(math.hypot(*p) - 1.0) <= tol.eps
    )
    radii = _radius_classes([math.hypot(*p) for p in norm], tol)
    return PatternProfile(
        normalized=norm,
        center_points=center_pts,
        sequences=tuple(sequences),
        mu_hat=mu_hat,
        achieving=achieving,
        anchor_tour_pos=anchor_pos,
        radii=radii,
    )


def _radius_classes(radii: list[float], tol: Tolerance) -> tuple[float, ...]:
    classes: list[float] = []
    for r in sorted(radii, reverse=True):
        if not classes or classes[-1] - r > tol.eps:
            classes.append(r)
    return tuple(classes)


@dataclass(frozen=True)
class CircularDecomposition:
    """Concentric circles through the pattern points, radii decreasing."""

    circles: tuple[Circle, ...]
    point_circle: tuple[int, ...]  # per pattern point, index into circles


def circular_decomposition(
    pattern: Sequence[Point], tol: Tolerance
) -> CircularDecomposition:
    if len(pattern) == 0:
        raise GeometryError("circular decomposition needs a nonempty pattern")
    _check_finite(pattern)
    sec = smallest_enclosing_circle(pattern, tol)
    radii = _radius_classes([dist(p, sec.center) for p in pattern], tol)
    assignment = []
    for p in pattern:
        r = dist(p, sec.center)
        idx = min(range(len(radii)), key=lambda i: abs(radii[i] - r))
        assignment.append(idx)
    circles = tuple(Circle(sec.center, r) for r in radii)
    return CircularDecomposition(circles, tuple(assignment))


# ---------------------------------------------------------------------------
# Similarity matching
# ---------------------------------------------------------------------------

def _match_sets(a: Sequence[Point], b: Sequence[Point], eps: float) -> bool:
    """Exact bijective matching of two equal-size point lists within eps."""
    n = len(a)
    cand = []
    for p in a:
        row = [j for j, q in enumerate(b) if dist(p, q) <= eps]
        if not row:
            return False
        cand.append(row)
    used = [False] * n
    order = sorted(range(n), key=lambda i: len(cand[i]))

    def assign(k: int) -> bool:
        if k == n:
            return True
        i = order[k]
        for j in cand[i]:
            if not used[j]:
                used[j] = True
                if assign(k + 1):
                    return True
                used[j] = False
        return False

    return assign(0)


@lru_cache(maxsize=8192)
def _sec_cached(points: tuple, eps: float) -> Circle:
    return smallest_enclosing_circle(points, Tolerance(eps))


def is_similar(q: Sequence[Point], pattern: Sequence[Point], tol: Tolerance) -> bool:
    """True when some similarity maps the pattern onto q (as point sets)."""
    if len(q) != len(pattern):
        return False
    if len(q) == 0:
        return True
    _check_finite(q)
    _check_finite(pattern)
    sec_q = _sec_cached(tuple(q), tol.eps)
    sec_p = _sec_cached(tuple(pattern), tol.eps)
    if sec_q.radius <= tol.eps or sec_p.radius <= tol.eps:
        return sec_q.radius <= tol.eps and sec_p.radius <= tol.eps
    qn = [
        ((p[0] - sec_q.center[0]) / sec_q.radius,
         (p[1] - sec_q.center[1]) / sec_q.radius)
        for p in q
    ]
    pn = [
        ((p[0] - sec_p.center[0]) / sec_p.radius,
         (p[1] - sec_p.center[1]) / sec_p.radius)
        for p in pattern
    ]
    # Cheap reject on the normalized radius multisets.
    rq = sorted(math.hypot(*p) for p in qn)
    rp = sorted(math.hypot(*p) for p in pn)
    if any(abs(a - b) > 2.0 * tol.eps for a, b in zip(rq, rp)):
        return False
    anchor = next(p for p in pn if abs(math.hypot(*p) - 1.0) <= tol.eps)
    anchor_ang = math.atan2(anchor[1], anchor[0])
    for target in qn:
        if abs(math.hypot(*target) - 1.0) > tol.eps:
            continue
        t_ang = math.atan2(target[1], target[0])
        for reflect in (False, True):
            placed = []
            for p in pn:
                r = math.hypot(*p)
                ang = math.atan2(p[1], p[0])
                rel = ang - anchor_ang
                if reflect:
                    rel = -rel
                a = t_ang + rel
                placed.append((r * math.cos(a), r * math.sin(a)))
            if _match_sets(placed, qn, 2.0 * tol.eps):
                return True
    return False


# ---------------------------------------------------------------------------
# Small helpers shared with the algorithms
# ---------------------------------------------------------------------------

def segment_contains(
    p: Point, a: Point, b: Point, tol: Tolerance, *,
    include_a: bool = False, include_b: bool = False,
) -> bool:
    """True when p lies on segment ab (within eps laterally).

    Endpoint hits count only when the corresponding flag is set.
    """
    eps = tol.eps
    abx = b[0] - a[0]
    aby = b[1] - a[1]
    ab = math.hypot(abx, aby)
    if ab <= eps:
        near = math.hypot(p[0] - a[0], p[1] - a[1]) <= eps
        return near and (include_a or include_b)
    ux = abx / ab
    uy = aby / ab
    px = p[0] - a[0]
    py = p[1] - a[1]
    if abs(px * uy - py * ux) > eps:
        return False
    t = px * ux + py * uy
    lo = -eps if include_a else eps
    hi = ab + eps if include_b else ab - eps
    return lo <= t <= hi


def smallest_ray_gap(points: Sequence[Point], center: Point, tol: Tolerance) -> float:
    """Smallest angular gap between occupied rays; 2*pi with a single ray.

    Fallback used when the angle-sequence machinery reports "sequence
    undefined" (fewer than three rays).
    """
    groups = ray_groups([(p, ROBOT) for p in points], center, tol)
    if not groups:
        raise GeometryError("no rays around the center")
    if len(groups) == 1:
        return TWO_PI
    angles = sorted(g.angle for g in groups)
    gaps = [
        (angles[(i + 1) % len(angles)] - angles[i]) % TWO_PI or TWO_PI
        for i in range(len(angles))
    ]
    return min(gaps)
