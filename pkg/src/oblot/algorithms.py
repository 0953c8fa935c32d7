"""Robot programs: pattern formation and gathering under sequential activation.

Every operation here is a pure function of one robot's snapshot (plus the
input pattern), returning the destination in the robot's own frame.  The
large-pattern program fills pattern points through radial detours after
breaking symmetry with a unique smallest angle; the small-pattern program
anchors on the unique maximum-distance pair; gathering maintains a single
multiplicity once weak multiplicity detection grants one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .geometry import (
    PATTERN,
    ROBOT,
    TWO_PI,
    Circle,
    GeometryError,
    LeaderAngularSequence,
    PatternProfile,
    Point,
    Tolerance,
    co_radial,
    dist,
    is_similar,
    leader_angular_sequence,
    pattern_sequences,
    polar_angle,
    radial_detour,
    radiangular_distance,
    ray_groups,
    segment_contains,
    smallest_enclosing_circle,
    smallest_ray_gap,
    sweep,
)
from .model import Snapshot

# Algorithm kinds
SEQ_PF = "seq-pf"
SEQ_PF_SMALL = "seq-pf-small"
SEQ_GATHERING = "seq-gathering"
GO_TO_CENTER_SEC = "go-to-center-sec"
RENDEZVOUS = "rendezvous"
AUTO = "auto"

ALGORITHM_KINDS = (
    SEQ_PF, SEQ_PF_SMALL, SEQ_GATHERING, GO_TO_CENTER_SEC, RENDEZVOUS, AUTO,
)

# Stage labels (engine-side bound accounting keys off these)
STAGE_INIT = "initialization"
STAGE_LEADER = "leader-configuration"
STAGE_PARTIAL = "partial-pattern-formation"
STAGE_FINAL = "finalization"
STAGE_UNIQUE_MAX = "unique-maximum"
STAGE_EQUALIZE = "equalization"
STAGE_GATHER = "gathering"


class CapabilityError(RuntimeError):
    """Algorithm needs a sensing capability the scenario did not grant."""


@dataclass(frozen=True)
class Decision:
    """Computed destination (in the observer's frame) plus diagnostics."""

    destination: Point
    stage: str
    info: dict = field(default_factory=dict, compare=False)

    def stays(self, own: Point, tol: Tolerance) -> bool:
        return tol.same_point(self.destination, own)


def resolve_algorithm(kind: str, pattern_size: int) -> str:
    if kind != AUTO:
        return kind
    if pattern_size == 1:
        return SEQ_GATHERING
    if pattern_size <= 4:
        return SEQ_PF_SMALL
    return SEQ_PF


def compute(kind: str, snap: Snapshot, pattern: Sequence[Point],
            tol: Tolerance) -> Decision:
    """Dispatch one Compute phase."""
    kind = resolve_algorithm(kind, len(pattern))
    if kind == SEQ_PF:
        return seq_pf(snap, pattern, tol)
    if kind == SEQ_PF_SMALL:
        return seq_pf_small(snap, pattern, tol)
    if kind == SEQ_GATHERING:
        return seq_gathering(snap, tol)
    if kind == GO_TO_CENTER_SEC:
        return go_to_center_sec(snap, tol)
    if kind == RENDEZVOUS:
        return rendezvous(snap)
    raise ValueError(f"unknown algorithm kind {kind!r}")


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def _sec_responsible(p: Point, points: Sequence[Point], sec: Circle,
                     tol: Tolerance, *, margin: bool = True,
                     anchored: Sequence[Point] = ()) -> bool:
    """True when the enclosing circle needs the robots at p.

    Removal must leave the radius intact AND the remaining boundary points
    pinning the circle durably.  Pinning that rests on an exactly-antipodal
    pair is fragile when those two points belong to robots that may still
    move (all four corners of a square stay put), but durable when both
    sit at occupied pattern points (``anchored``), which is what lets the
    rest of the boundary leave once the circle-fixing pattern points are
    taken.  ``margin=False`` relaxes to the pure radius test; callers fall
    back to it when the strict reading would leave nobody able to move.
    """
    if abs(dist(p, sec.center) - sec.radius) > tol.eps:
        return False
    rest = [x for x in points if x != p]
    if not rest:
        return True
    shrunk = smallest_enclosing_circle(rest, tol)
    if shrunk.radius < sec.radius - tol.eps:
        return True
    if not margin:
        return False
    boundary = [
        x for x in rest if abs(dist(x, sec.center) - sec.radius) <= tol.eps
    ]
    if len(boundary) < 2:
        return True
    ordered = sorted(boundary, key=lambda x: polar_angle(x, sec.center))
    for i, a in enumerate(ordered):
        b = ordered[(i + 1) % len(ordered)]
        gap = (polar_angle(b, sec.center) - polar_angle(a, sec.center)) % TWO_PI
        if gap == 0.0:
            gap = TWO_PI
        if gap >= math.pi - tol.angular:
            a_anchor = any(dist(a, y) <= tol.eps for y in anchored)
            b_anchor = any(dist(b, y) <= tol.eps for y in anchored)
            if not (a_anchor and b_anchor):
                return True
    return False


def _occupied(target: Point, points: Sequence[Point], tol: Tolerance) -> bool:
    return any(dist(target, p) <= tol.eps for p in points)


def _blockers_on(a: Point, b: Point, points: Sequence[Point], tol: Tolerance,
                 *, include_a=False, include_b=False,
                 exclude: Sequence[Point] = ()) -> list[Point]:
    eps = tol.eps
    banned = set(exclude)
    abx = b[0] - a[0]
    aby = b[1] - a[1]
    ab = math.hypot(abx, aby)
    out = []
    if ab <= eps:
        if include_a or include_b:
            for p in points:
                if p not in banned and math.hypot(p[0] - a[0], p[1] - a[1]) <= eps:
                    out.append(p)
        return out
    ux = abx / ab
    uy = aby / ab
    lo = -eps if include_a else eps
    hi = ab + eps if include_b else ab - eps
    for p in points:
        if p in banned:
            continue
        px = p[0] - a[0]
        py = p[1] - a[1]
        if abs(px * uy - py * ux) > eps:
            continue
        if lo <= px * ux + py * uy <= hi:
            out.append(p)
    return out


def _place_pattern(profile: PatternProfile, center: Point, rho: float,
                   anchor_angle: float, reflect: bool) -> list[Point]:
    """Similarity-place the normalized pattern onto a scene.

    The mu-hat anchor lands on the ray at ``anchor_angle`` scaled to the
    scene radius; ``reflect`` mirrors the pattern across that ray, which
    flips the traversal chirality of the canonical sequence.
    """
    anchor = profile.mu_hat.tour[profile.anchor_tour_pos]
    phi_a = math.atan2(anchor[1], anchor[0])
    placed = []
    for p in profile.normalized:
        r = math.hypot(p[0], p[1])
        rel = math.atan2(p[1], p[0]) - phi_a
        if reflect:
            rel = -rel
        a = anchor_angle + rel
        placed.append(
            (center[0] + rho * r * math.cos(a),
             center[1] + rho * r * math.sin(a))
        )
    return placed


def _mu_hat_sign(profile: PatternProfile) -> int:
    """Sweep sign of the canonical tour in the pattern's own coordinates."""
    return 1 if profile.mu_hat.direction == "ccw" else -1


def _match_counts(placed: Sequence[Point], robots: Sequence[Point],
                  tol: Tolerance) -> tuple[list[Point], list[Point]]:
    """Split placed points into (occupied, missing) against robot points."""
    occupied, missing = [], []
    for y in placed:
        (occupied if _occupied(y, robots, tol) else missing).append(y)
    return occupied, missing


def _exact_set_match(placed: Sequence[Point], robots: Sequence[Point],
                     tol: Tolerance) -> bool:
    """Bijective eps-matching; sizes must already agree."""
    if len(placed) != len(robots):
        return False
    used = [False] * len(robots)
    for y in placed:
        hit = None
        for j, r in enumerate(robots):
            if not used[j] and dist(y, r) <= 2.0 * tol.eps:
                hit = j
                break
        if hit is None:
            return False
        used[hit] = True
    return True


# ---------------------------------------------------------------------------
# SeqPF: |pattern| >= 5
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PatternRanking:
    """Pattern points ordered by occupation priority (p_1 first)."""

    points: tuple[Point, ...]
    circle_index: tuple[int, ...]


@dataclass(frozen=True)
class JointConfiguration:
    """Robot points and the placed pattern, with the agreed chirality."""

    robot_points: tuple[Point, ...]
    placed_pattern: tuple[Point, ...]
    anchor: Point                 # placed pattern point at the theta_1 boundary robot
    cw_dir: int
    sec: Circle
    leader_q: LeaderAngularSequence
    leader_joint: Optional[LeaderAngularSequence]

    @property
    def has_leader_sequence(self) -> bool:
        return self.leader_joint is not None


def separate(snap: Snapshot, tol: Tolerance) -> Decision:
    """Step one local unit along the local +x axis, halving on obstruction."""
    own = snap.self_point
    blockers = []
    for p in snap.points:
        if p == own:
            continue
        if abs(p[1] - own[1]) <= tol.eps and p[0] > own[0] + tol.eps:
            blockers.append(p[0] - own[0])
    unit_target = (own[0] + 1.0, own[1])
    if not blockers or min(blockers) > 1.0 + tol.eps:
        return Decision(unit_target, STAGE_INIT, {"branch": "unit"})
    nearest = min(blockers)
    return Decision((own[0] + nearest / 2.0, own[1]), STAGE_INIT,
                    {"branch": "midpoint"})


def rank_pattern_points(placed: Sequence[Point], anchor: Point, cw_dir: int,
                        sec: Circle, tol: Tolerance) -> PatternRanking:
    """Priority order of placed pattern points.

    The outermost circle ranks first and is ordered so that the anchor's
    antipode region fills early (keeping the enclosing circle pinned);
    inner circles rank clockwise from the projection of the anchor ray.
    """
    center = sec.center
    radii: list[float] = []
    for y in placed:
        r = dist(y, center)
        if not any(abs(r - c) <= tol.eps for c in radii):
            radii.append(r)
    radii.sort(reverse=True)
    circle_of = {}
    for i, y in enumerate(placed):
        r = dist(y, center)
        best, best_err = 0, abs(radii[0] - r)
        for c in range(1, len(radii)):
            err = abs(radii[c] - r)
            if err < best_err:
                best, best_err = c, err
        circle_of[i] = best
    anchor_angle = polar_angle(anchor, center)
    cw_cache: dict[Point, float] = {}

    def cw_from_anchor(y: Point) -> float:
        s = cw_cache.get(y)
        if s is None:
            s = sweep(anchor_angle, polar_angle(y, center), cw_dir)
            if s >= TWO_PI - tol.angular:
                s = 0.0
            cw_cache[y] = s
        return s

    ranked: list[Point] = []
    circle_idx: list[int] = []
    for c in range(len(radii)):
        members = [placed[i] for i in sorted(circle_of) if circle_of[i] == c]
        if radii[c] <= tol.eps:
            ranked.extend(members)
            circle_idx.extend([c] * len(members))
            continue
        if c == 0:
            first = min(members, key=lambda y: dist(y, anchor))
            if dist(first, anchor) > tol.eps:
                raise GeometryError("anchor is not a placed boundary point")
            rest = [y for y in members if y is not first]
            antipodal = None
            for y in rest:
                s = cw_from_anchor(y)
                if abs(s - math.pi) <= tol.angular:
                    antipodal = y
                    break
            ordered = [first]
            if antipodal is not None:
                ordered.append(antipodal)
                rest = [y for y in rest if y is not antipodal]
            else:
                before = [y for y in rest if cw_from_anchor(y) < math.pi]
                after = [y for y in rest if cw_from_anchor(y) > math.pi]
                # Both sides are populated whenever the boundary points
                # actually pin the circle; otherwise plain order suffices.
                if before and after:
                    p2 = max(before, key=cw_from_anchor)
                    p3 = min(after, key=cw_from_anchor)
                    ordered.extend([p2, p3])
                    rest = [y for y in rest if y is not p2 and y is not p3]
            ordered.extend(sorted(rest, key=cw_from_anchor))
            ranked.extend(ordered)
            circle_idx.extend([c] * len(ordered))
        else:
            ordered = sorted(members, key=cw_from_anchor)
            ranked.extend(ordered)
            circle_idx.extend([c] * len(ordered))
    return PatternRanking(tuple(ranked), tuple(circle_idx))


def last(points: Sequence[Point], own: Point, profile: PatternProfile,
         sec: Circle, tol: Tolerance) -> Optional[Decision]:
    """Finalization certificates: pattern formed, or only the lowest-priority
    point left with stragglers queued on its radius."""
    k = len(profile.normalized)
    if len(points) < k:
        return None
    center, rho = sec.center, sec.radius

    # Cheap reject: at least k-1 robots must sit at pattern-circle radii,
    # and the remaining robot points must share a single ray.
    on_radius = []
    off_radius = []
    for p in points:
        r = dist(p, center) / rho if rho > 0 else 0.0
        if any(abs(r - c) <= 2.0 * tol.eps for c in profile.radii) :
            on_radius.append(p)
        else:
            off_radius.append(p)
    if len(on_radius) < k - 1:
        return None
    for i in range(1, len(off_radius)):
        if not co_radial(off_radius[0], off_radius[i], center, tol):
            return None

    boundary_robots = [
        p for p in points if abs(dist(p, center) - rho) <= tol.eps
    ]
    placements = []
    for b in boundary_robots:
        ang = polar_angle(b, center)
        for reflect in (False, True):
            placements.append((ang, reflect))

    # Case (a): the configuration already is the pattern.
    if len(points) == k:
        for ang, reflect in placements:
            placed = _place_pattern(profile, center, rho, ang, reflect)
            if _exact_set_match(placed, list(points), tol):
                return Decision(own, STAGE_FINAL,
                                {"branch": "formed", "formed": True})

    # Case (b): all pattern points but the last occupied, stragglers on
    # the segment from the center to the last point.
    tour_sign = _mu_hat_sign(profile)
    for ang, reflect in placements:
        placed = _place_pattern(profile, center, rho, ang, reflect)
        occupied, missing = _match_counts(placed, points, tol)
        if len(missing) > 1:
            continue
        cw_dir = -tour_sign if reflect else tour_sign
        anchor = placed[profile.normalized.index(
            profile.mu_hat.tour[profile.anchor_tour_pos])]
        try:
            ranking = rank_pattern_points(placed, anchor, cw_dir, sec, tol)
        except GeometryError:
            continue
        p_k = ranking.points[-1]
        if missing and dist(missing[0], p_k) > 2.0 * tol.eps:
            continue
        strays = [
            p for p in points if not _occupied(p, placed, tol)
        ]
        if not strays:
            continue  # fully matched configurations are case (a) territory
        if not all(
            segment_contains(s, center, p_k, tol, include_a=True, include_b=True)
            for s in strays
        ):
            continue
        if any(own == s for s in strays):
            return Decision(p_k, STAGE_FINAL, {"branch": "last-one", "target": p_k})
        return Decision(own, STAGE_FINAL, {"branch": "last-one-wait"})
    return None


def overlap(points: Sequence[Point], profile: PatternProfile, sec: Circle,
            tol: Tolerance) -> Optional[JointConfiguration]:
    """Joint configuration: pattern anchored on the theta_1 boundary robot,
    canonical order following the leader chirality."""
    lam = leader_angular_sequence(points, None, tol, sec=sec)
    if lam is None:
        return None
    q_j = lam.boundary_point
    anchor_angle = polar_angle(q_j, sec.center)
    reflect = _mu_hat_sign(profile) != lam.cw_dir
    placed = _place_pattern(profile, sec.center, sec.radius, anchor_angle, reflect)
    anchor = placed[profile.normalized.index(
        profile.mu_hat.tour[profile.anchor_tour_pos])]
    lam_joint = leader_angular_sequence(points, placed, tol, sec=sec)
    return JointConfiguration(
        robot_points=tuple(points),
        placed_pattern=tuple(placed),
        anchor=anchor,
        cw_dir=lam.cw_dir,
        sec=sec,
        leader_q=lam,
        leader_joint=lam_joint,
    )


def leader(points: Sequence[Point], own: Point,
           gamma: Optional[JointConfiguration], sec: Circle,
           profile: PatternProfile, tol: Tolerance) -> Decision:
    """Create a leader configuration: send a robot to the center, then step
    out to carve the unique smallest angle."""
    center, rho = sec.center, sec.radius
    center_pt = next(
        (p for p in points if dist(p, center) <= tol.eps), None
    )
    if center_pt is None:
        anchored = ()
        if gamma is not None:
            anchored = [
                y for y in gamma.placed_pattern if _occupied(y, points, tol)
            ]

        def excluded(p, margin):
            if _sec_responsible(p, points, sec, tol, margin=margin,
                                anchored=anchored):
                return "sec-responsible"
            if _blockers_on(center, p, points, tol, exclude=[p]):
                return "blocked-radius"
            if gamma is not None:
                lam = gamma.leader_q
                if p in (lam.inner_point, lam.boundary_point):
                    buddies = [
                        q for q in points
                        if q != p and co_radial(q, p, center, tol)
                        and dist(q, center) > tol.eps
                    ]
                    if not buddies:
                        return "theta1-keeper"
            return None

        # The margin-strict reading must never freeze everyone; relax to
        # the pure radius test if it would.
        use_margin = any(excluded(p, True) is None for p in points)
        reason = excluded(own, use_margin)
        if reason is not None:
            return Decision(own, STAGE_LEADER, {"branch": reason})
        return Decision(center, STAGE_LEADER, {"branch": "to-center"})
    if own == center_pt:
        others = [p for p in points if p != own]
        if gamma is not None:
            q_j = gamma.leader_q.boundary_point
            cw_dir = gamma.leader_q.cw_dir
            structure = others + list(gamma.placed_pattern)
        else:
            boundary = [
                p for p in others if abs(dist(p, center) - rho) <= tol.eps
            ]
            q_j = min(boundary, key=lambda p: (polar_angle(p, center), p))
            cw_dir = -1
            anchor_angle = polar_angle(q_j, center)
            reflect = _mu_hat_sign(profile) != cw_dir
            planned = _place_pattern(profile, center, rho, anchor_angle, reflect)
            structure = others + planned
        xi = smallest_ray_gap(structure, center, tol)
        u_angle = polar_angle(q_j, center) - cw_dir * (xi / 3.0)
        u_prime = (
            center[0] + (rho / 2.0) * math.cos(u_angle),
            center[1] + (rho / 2.0) * math.sin(u_angle),
        )
        return Decision(u_prime, STAGE_LEADER,
                        {"branch": "step-out", "xi": xi, "q_j": q_j})
    return Decision(own, STAGE_LEADER, {"branch": "center-occupied-wait"})


def _robot_priority(points: Sequence[Point], anchor: Point, cw_dir: int,
                    center: Point, tol: Tolerance) -> list[Point]:
    """Robots ordered by radiangular distance from the anchor.

    Rays are grouped so that eps-co-radial robots compare on the same
    angle: on the anchor ray, nearer to the anchor wins; elsewhere,
    farther from the center wins.
    """
    anchor_angle = polar_angle(anchor, center)
    groups = ray_groups([(p, ROBOT) for p in points], center, tol)
    keyed = []
    for g in groups:
        s = sweep(anchor_angle, g.angle, cw_dir)
        on_anchor_ray = s <= tol.angular or s >= TWO_PI - tol.angular
        for p, _tag in g.members:
            if on_anchor_ray:
                keyed.append(((0.0, dist(p, anchor)), p))
            else:
                keyed.append(((s, -dist(p, center)), p))
    for p in points:
        if dist(p, center) <= tol.eps:
            keyed.append(((0.0, dist(p, anchor)), p))
    keyed.sort(key=lambda e: (e[0][0], e[0][1]))
    return [p for _, p in keyed]


def occupy(gamma: JointConfiguration, own: Point, tol: Tolerance) -> Decision:
    """Move the walker toward the highest-priority empty pattern point."""
    center = gamma.sec.center
    rho = gamma.sec.radius
    points = list(gamma.robot_points)
    placed = list(gamma.placed_pattern)
    ranking = rank_pattern_points(
        placed, gamma.anchor, gamma.cw_dir, gamma.sec, tol
    )
    # one proximity pass: which placed points hold a robot, which robots are free
    eps = tol.eps
    occ_placed = [False] * len(placed)
    robot_free = [True] * len(points)
    for i, (px, py) in enumerate(points):
        for j, (yx, yy) in enumerate(placed):
            if abs(px - yx) <= eps and abs(py - yy) <= eps \
                    and math.hypot(px - yx, py - yy) <= eps:
                occ_placed[j] = True
                robot_free[i] = False
    occupied_set = {y for j, y in enumerate(placed) if occ_placed[j]}
    robot_is_free = dict(zip(points, robot_free))
    empty = [y for y in ranking.points if y not in occupied_set]
    p_l = empty[0] if empty else ranking.points[-1]
    free = [p for i, p in enumerate(points) if robot_free[i]]
    if not free:
        return Decision(own, STAGE_PARTIAL, {"branch": "no-free"})
    anchored = sorted(occupied_set)
    ordered = _robot_priority(free, gamma.anchor, gamma.cw_dir, center, tol)
    movable = [
        p for p in ordered
        if not _sec_responsible(p, points, gamma.sec, tol, anchored=anchored)
    ]
    if not movable:
        movable = [
            p for p in ordered
            if not _sec_responsible(p, points, gamma.sec, tol, margin=False)
        ]
    if not movable:
        return Decision(own, STAGE_PARTIAL, {"branch": "all-pinned"})
    u = movable[0]

    detour = radial_detour(u, p_l, center, tol)
    detour_blockers = []
    if len(detour) == 2:
        detour_blockers = _blockers_on(u, p_l, points, tol, exclude=[u])
    else:
        detour_blockers = _blockers_on(u, center, points, tol,
                                       include_b=True, exclude=[u])
        detour_blockers += [
            b for b in _blockers_on(center, p_l, points, tol, exclude=[u])
            if b not in detour_blockers
        ]
    if dist(p_l, center) <= tol.eps:
        radius_blockers = []
    else:
        edge = (
            center[0] + rho * math.cos(polar_angle(p_l, center)),
            center[1] + rho * math.sin(polar_angle(p_l, center)),
        )
        radius_blockers = [
            b for b in _blockers_on(center, edge, points, tol,
                                    include_b=True, exclude=[u])
            if dist(b, center) > tol.eps
        ]

    walker = None
    path_note = "clean"
    if not detour_blockers and not radius_blockers:
        walker = u
    elif detour_blockers and not radius_blockers:
        path_note = "detour-blocked"
        candidates = [
            b for b in detour_blockers
            if not _sec_responsible(b, points, gamma.sec, tol, anchored=anchored)
        ] or detour_blockers
        walker = min(
            candidates,
            key=lambda b: radiangular_distance(b, p_l, center, gamma.cw_dir, tol),
        )
    else:
        path_note = "radius-occupied"
        free_on_radius = [
            b for b in radius_blockers
            if robot_is_free.get(b, True)
            and not _sec_responsible(b, points, gamma.sec, tol, anchored=anchored)
        ]
        if free_on_radius:
            v = max(free_on_radius, key=lambda b: dist(b, center))
            inner = _blockers_on(v, p_l, points, tol, exclude=[v])
            if not inner:
                walker = v
            else:
                walker = min(inner, key=lambda b: dist(b, p_l))
        elif detour_blockers:
            candidates = [
                b for b in detour_blockers
                if not _sec_responsible(b, points, gamma.sec, tol, anchored=anchored)
            ] or detour_blockers
            walker = min(
                candidates,
                key=lambda b: radiangular_distance(b, p_l, center, gamma.cw_dir, tol),
            )
        else:
            walker = u

    info = {
        "branch": path_note,
        "walker": walker,
        "target": p_l,
        "path": radial_detour(walker, p_l, center, tol),
    }
    if own == walker:
        if co_radial(own, p_l, center, tol):
            return Decision(p_l, STAGE_PARTIAL, info)
        return Decision(center, STAGE_PARTIAL, info)
    return Decision(own, STAGE_PARTIAL, info)


def seq_pf(snap: Snapshot, pattern: Sequence[Point], tol: Tolerance) -> Decision:
    """Universal pattern formation for patterns of at least 5 points."""
    k = len(pattern)
    if k < 5:
        raise ValueError("seq_pf requires a pattern of at least 5 points")
    points = list(snap.points)
    own = snap.self_point
    if len(points) < k:
        return separate(snap, tol)
    sec = smallest_enclosing_circle(points, tol)
    profile = pattern_sequences(pattern, tol)
    res = last(points, own, profile, sec, tol)
    if res is not None:
        return res
    gamma = overlap(points, profile, sec, tol)
    if gamma is None:
        return leader(points, own, None, sec, profile, tol)
    if gamma.has_leader_sequence:
        return occupy(gamma, own, tol)
    return leader(points, own, gamma, sec, profile, tol)


# ---------------------------------------------------------------------------
# SeqPF': 2 <= |pattern| <= 4
# ---------------------------------------------------------------------------

def distance_deviation(q_rest: Sequence[Point], p_rest: Sequence[Point]) -> float:
    """Residual distance between leftover robots and leftover pattern points."""
    if len(q_rest) != len(p_rest) or not 1 <= len(q_rest) <= 2:
        raise ValueError("distance deviation defined for 1 or 2 leftover points")
    if len(q_rest) == 1:
        return dist(p_rest[0], q_rest[0])
    a = dist(p_rest[0], q_rest[0]) + dist(p_rest[1], q_rest[1])
    b = dist(p_rest[1], q_rest[0]) + dist(p_rest[0], q_rest[1])
    return min(a, b)


def _max_pairs(points: Sequence[Point], tol: Tolerance):
    best = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            best = max(best, dist(points[i], points[j]))
    pairs = [
        (points[i], points[j])
        for i in range(len(points))
        for j in range(i + 1, len(points))
        if dist(points[i], points[j]) >= best - tol.eps
    ]
    return best, pairs


def _pair_placements(pattern: Sequence[Point], q1: Point, q2: Point,
                     tol: Tolerance) -> list[tuple[Point, ...]]:
    """All scalings of the pattern gluing a maximum pattern pair onto q1 q2."""
    _, ppairs = _max_pairs(pattern, tol)
    target = dist(q1, q2)
    out = []
    for (pa, pb) in ppairs:
        for (src1, src2) in ((pa, pb), (pb, pa)):
            span = dist(src1, src2)
            scale = target / span
            base_ang = math.atan2(q2[1] - q1[1], q2[0] - q1[0])
            src_ang = math.atan2(src2[1] - src1[1], src2[0] - src1[0])
            for reflect in (False, True):
                placed = []
                for p in pattern:
                    vx, vy = p[0] - src1[0], p[1] - src1[1]
                    r = math.hypot(vx, vy) * scale
                    ang = math.atan2(vy, vx) - src_ang
                    if reflect:
                        ang = -ang
                    ang += base_ang
                    placed.append(
                        (q1[0] + r * math.cos(ang), q1[1] + r * math.sin(ang))
                    )
                out.append(tuple(placed))
    return out


def _canonical_pair(q1: Point, q2: Point, points: Sequence[Point]) -> tuple[Point, Point]:
    """Frame-independent ordering of the maximum pair endpoints."""
    def profile_key(e: Point):
        return tuple(sorted(round(dist(e, p), 12) for p in points))

    k1, k2 = profile_key(q1), profile_key(q2)
    if k1 < k2:
        return q1, q2
    if k2 < k1:
        return q2, q1
    return (q1, q2) if q1 <= q2 else (q2, q1)


def _placement_descriptor(placed: Sequence[Point], q1: Point, q2: Point):
    """Reflection/rotation-invariant sort key for tie-breaking placements."""
    ax = (q2[0] - q1[0], q2[1] - q1[1])
    norm = math.hypot(*ax)
    ux, uy = ax[0] / norm, ax[1] / norm
    desc = []
    for p in placed:
        vx, vy = p[0] - q1[0], p[1] - q1[1]
        along = vx * ux + vy * uy
        across = -vx * uy + vy * ux
        desc.append((round(along, 12), round(abs(across), 12),
                     1 if across >= 0 else -1))
    return tuple(sorted(desc))


def seq_pf_small(snap: Snapshot, pattern: Sequence[Point], tol: Tolerance) -> Decision:
    """Pattern formation for 2-4 pattern points via the unique maximum pair."""
    k = len(pattern)
    if not 2 <= k <= 4:
        raise ValueError("seq_pf_small requires a pattern of 2 to 4 points")
    points = list(snap.points)
    own = snap.self_point
    if len(points) < k:
        return separate(snap, tol)
    # Formed configurations are absorbing.  Without this check a pattern
    # whose maximum distance is tied (isoceles triangle, square) would be
    # torn apart again by the unique-maximum stage right after forming.
    if len(points) == k and is_similar(points, pattern, tol):
        return Decision(own, STAGE_FINAL, {"branch": "formed", "formed": True})
    _, pairs = _max_pairs(points, tol)
    if len(pairs) > 1:
        endpoints = {p for pair in pairs for p in pair}
        if own in endpoints:
            far = max(points, key=lambda p: (dist(own, p), p))
            d = dist(own, far)
            ux, uy = (own[0] - far[0]) / d, (own[1] - far[1]) / d
            return Decision((own[0] + ux, own[1] + uy), STAGE_UNIQUE_MAX,
                            {"branch": "stretch"})
        return Decision(own, STAGE_UNIQUE_MAX, {"branch": "wait"})
    q1, q2 = pairs[0]
    if len(points) > k:
        if own in (q1, q2):
            return Decision(own, STAGE_EQUALIZE, {"branch": "endpoint"})
        target = min((q1, q2), key=lambda e: (dist(own, e), e))
        if _blockers_on(own, target, points, tol, exclude=[own]):
            return Decision(own, STAGE_EQUALIZE, {"branch": "blocked"})
        return Decision(target, STAGE_EQUALIZE, {"branch": "merge"})
    # |Q| == k: anchor the pattern on the pair and fill the best overlap.
    if own in (q1, q2):
        return Decision(own, STAGE_FINAL, {"branch": "endpoint"})
    q1, q2 = _canonical_pair(q1, q2, points)
    placements = _pair_placements(pattern, q1, q2, tol)
    best = None
    best_key = None
    for placed in placements:
        q_rest = [p for p in points if p != q1 and p != q2]
        p_rest = [y for y in placed
                  if dist(y, q1) > tol.eps and dist(y, q2) > tol.eps]
        if len(p_rest) != len(q_rest):
            # Pattern pair endpoints swallowed an extra robot point; the
            # placement cannot be evaluated, skip it.
            continue
        dev = distance_deviation(q_rest, p_rest) if q_rest else 0.0
        key = (round(dev, 12), _placement_descriptor(placed, q1, q2))
        if best_key is None or key < best_key:
            best, best_key = placed, key
    if best is None:
        return Decision(own, STAGE_FINAL, {"branch": "no-placement"})
    unplaced_robots = [p for p in points if not _occupied(p, best, tol)]
    empty_targets = [y for y in best if not _occupied(y, points, tol)]
    mine = []
    for y in empty_targets:
        closest = min(unplaced_robots, key=lambda p: (dist(p, y), p))
        if closest == own:
            mine.append(y)
    if not mine:
        return Decision(own, STAGE_FINAL, {"branch": "not-closest"})
    target = min(mine, key=lambda y: (dist(own, y), y))
    if _blockers_on(own, target, points, tol, exclude=[own]):
        return Decision(own, STAGE_FINAL, {"branch": "blocked"})
    return Decision(target, STAGE_FINAL, {"branch": "fill", "target": target})


# ---------------------------------------------------------------------------
# Gathering family
# ---------------------------------------------------------------------------

def seq_gathering(snap: Snapshot, tol: Tolerance) -> Decision:
    """Gathering with weak multiplicity detection under sequential activation."""
    if snap.multiplicity_bits is None:
        raise CapabilityError("seq_gathering needs weak multiplicity detection")
    points = list(snap.points)
    bits = list(snap.multiplicity_bits)
    own = snap.self_point
    kappa = sum(bits)
    at_multiplicity = bits[snap.self_index]
    if kappa == 1:
        if at_multiplicity:
            return Decision(own, STAGE_GATHER, {"branch": "anchor"})
        target = points[bits.index(True)]
        return Decision(target, STAGE_GATHER, {"branch": "join"})
    if kappa > 1:
        if not at_multiplicity:
            return Decision(own, STAGE_GATHER, {"branch": "wait"})
        others = [p for p in points if p != own]
        closest = min(others, key=lambda p: (dist(own, p), polar_angle(p, own), p))
        z = ((own[0] + closest[0]) / 2.0, (own[1] + closest[1]) / 2.0)
        while _occupied(z, points, tol) and dist(z, own) > 4.0 * tol.eps:
            z = ((own[0] + z[0]) / 2.0, (own[1] + z[1]) / 2.0)
        if _occupied(z, points, tol):
            return Decision(own, STAGE_GATHER, {"branch": "split-stuck"})
        return Decision(z, STAGE_GATHER, {"branch": "split"})
    others = [p for p in points if p != own]
    if not others:
        return Decision(own, STAGE_GATHER, {"branch": "alone"})
    target = min(others, key=lambda p: (dist(own, p), polar_angle(p, own), p))
    return Decision(target, STAGE_GATHER, {"branch": "pair-up"})


def go_to_center_sec(snap: Snapshot, tol: Tolerance) -> Decision:
    sec = smallest_enclosing_circle(list(snap.points), tol)
    return Decision(sec.center, STAGE_GATHER, {"branch": "center"})


def rendezvous(snap: Snapshot) -> Decision:
    points = list(snap.points)
    own = snap.self_point
    if len(points) == 2:
        other = points[1 - snap.self_index]
        return Decision(other, STAGE_GATHER, {"branch": "other"})
    return Decision(own, STAGE_GATHER, {"branch": "stay"})
