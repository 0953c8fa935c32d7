"""World state for oblivious point robots: configurations as multisets,
private coordinate frames, snapshots, and the non-rigid Move transition.

Robot ids exist only on the adversary side of the fence.  Snapshots
expose one entry per distinct occupied point, sorted in local
coordinates, so neither identities nor multiset counts leak into the
algorithms (weak multiplicity bits are granted explicitly per scenario).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from ._kernels import cluster_owners
from .geometry import Point, Tolerance, dist


class ModelError(ValueError):
    pass


class AdversaryContractError(RuntimeError):
    """A movement decision fell outside [min(delta, d), d]."""


@dataclass(frozen=True)
class FrameSpec:
    """Adversary-supplied private frame: rotation, handedness, unit scale."""

    rotation: float = 0.0
    handedness: int = 1
    unit: float = 1.0

    def __post_init__(self):
        if self.handedness not in (1, -1):
            raise ModelError("handedness must be +1 or -1")
        if not (self.unit > 0.0 and math.isfinite(self.unit)):
            raise ModelError("unit must be a positive finite real")


@dataclass(frozen=True)
class LocalFrame:
    """A frame anchored at the robot's current position."""

    origin: Point
    rotation: float
    handedness: int
    unit: float

    def to_local(self, p: Point) -> Point:
        vx = p[0] - self.origin[0]
        vy = p[1] - self.origin[1]
        c = math.cos(self.rotation)
        s = math.sin(self.rotation)
        x = (vx * c + vy * s) / self.unit
        y = self.handedness * (-vx * s + vy * c) / self.unit
        return (x, y)

    def to_global(self, p: Point) -> Point:
        x = p[0] * self.unit
        y = p[1] * self.unit * self.handedness
        c = math.cos(self.rotation)
        s = math.sin(self.rotation)
        return (
            self.origin[0] + x * c - y * s,
            self.origin[1] + x * s + y * c,
        )


def frame_at(spec: FrameSpec, origin: Point) -> LocalFrame:
    return LocalFrame(origin, spec.rotation, spec.handedness, spec.unit)


def to_global(frame: LocalFrame, local_destination: Point) -> Point:
    return frame.to_global(local_destination)


class Configuration:
    """Immutable multiset of robot positions with eps-clustered distinct points.

    New members of a cluster snap exactly to the first-created member's
    coordinates, so co-location is exact equality after construction and
    drift chains cannot form.
    """

    __slots__ = ("positions", "distinct_points", "counts", "point_of_robot", "tol")

    def __init__(self, positions: dict[int, Point], tol: Tolerance):
        rids = sorted(positions)
        raw = []
        for rid in rids:
            p = (float(positions[rid][0]), float(positions[rid][1]))
            if not (math.isfinite(p[0]) and math.isfinite(p[1])):
                raise ModelError(f"non-finite robot position {p!r}")
            raw.append(p)
        owners = cluster_owners(raw, tol.eps) if raw else []
        snapped: dict[int, Point] = {}
        distinct: list[Point] = []
        counts: list[int] = []
        point_of_robot: dict[int, int] = {}
        owner_to_idx: dict[int, int] = {}
        for i, rid in enumerate(rids):
            o = int(owners[i])
            if o not in owner_to_idx:
                owner_to_idx[o] = len(distinct)
                distinct.append(raw[o])
                counts.append(0)
            idx = owner_to_idx[o]
            counts[idx] += 1
            snapped[rid] = distinct[idx]
            point_of_robot[rid] = idx
        self.positions = snapped
        self.distinct_points = tuple(distinct)
        self.counts = tuple(counts)
        self.point_of_robot = point_of_robot
        self.tol = tol

    @property
    def robot_ids(self) -> list[int]:
        return list(self.positions)

    @property
    def multiplicity_flags(self) -> tuple[bool, ...]:
        return tuple(c > 1 for c in self.counts)

    def position(self, robot: int) -> Point:
        try:
            return self.positions[robot]
        except KeyError:
            raise ModelError(f"unknown robot id {robot}") from None

    def moved(self, moves: dict[int, Point]) -> "Configuration":
        new_positions = dict(self.positions)
        for rid, p in moves.items():
            if rid not in new_positions:
                raise ModelError(f"unknown robot id {rid}")
            # Pre-existing distinct points stay canonical: arrivals snap to
            # the coordinates created first, preventing drift chains.
            for q in self.distinct_points:
                if dist(p, q) <= self.tol.eps:
                    p = q
                    break
            new_positions[rid] = p
        return Configuration(new_positions, self.tol)


def count_distinct(config: Configuration, tol: Tolerance) -> tuple[int, dict[Point, int]]:
    """Distinct-point count plus the engine-side strong census."""
    census = dict(zip(config.distinct_points, config.counts))
    return len(config.distinct_points), census


@dataclass(frozen=True)
class Snapshot:
    """What one robot perceives: distinct points in its private frame."""

    points: tuple[Point, ...]
    self_index: int
    multiplicity_bits: Optional[tuple[bool, ...]] = None

    @property
    def self_point(self) -> Point:
        return self.points[self.self_index]


def take_snapshot(
    config: Configuration,
    robot: int,
    frame: LocalFrame,
    weak_detection: bool,
    tol: Tolerance,
) -> Snapshot:
    own = config.position(robot)
    own_idx = config.point_of_robot[robot]
    entries = []
    for i, p in enumerate(config.distinct_points):
        local = (0.0, 0.0) if i == own_idx else frame.to_local(p)
        entries.append((local, config.counts[i] > 1, i == own_idx))
    entries.sort(key=lambda e: (e[0][0], e[0][1]))
    points = tuple(e[0] for e in entries)
    self_index = next(i for i, e in enumerate(entries) if e[2])
    bits = tuple(e[1] for e in entries) if weak_detection else None
    return Snapshot(points=points, self_index=self_index, multiplicity_bits=bits)


@dataclass(frozen=True)
class MoveOutcome:
    intended: Point
    actual: Point
    truncated: bool


def resolve_move(
    start: Point,
    intended: Point,
    stop_distance: float,
    delta: float,
    tol: Tolerance,
) -> MoveOutcome:
    """Apply a truncation decision, enforcing the non-rigid contract."""
    d = dist(start, intended)
    if d <= tol.eps:
        return MoveOutcome(intended=intended, actual=start, truncated=False)
    lo = min(delta, d)
    if not (lo - tol.eps <= stop_distance <= d + tol.eps):
        raise AdversaryContractError(
            f"stop distance {stop_distance} outside [{lo}, {d}]"
        )
    stop = min(max(stop_distance, lo), d)
    if d - stop <= tol.eps:
        return MoveOutcome(intended=intended, actual=intended, truncated=False)
    t = stop / d
    actual = (start[0] + (intended[0] - start[0]) * t,
              start[1] + (intended[1] - start[1]) * t)
    return MoveOutcome(intended=intended, actual=actual, truncated=True)


def apply_move(
    config: Configuration,
    robot: int,
    intended_global: Point,
    stop_distance: float,
    delta: float,
    tol: Tolerance,
) -> tuple[Configuration, MoveOutcome]:
    start = config.position(robot)
    outcome = resolve_move(start, intended_global, stop_distance, delta, tol)
    new_config = config.moved({robot: outcome.actual})
    return new_config, outcome
