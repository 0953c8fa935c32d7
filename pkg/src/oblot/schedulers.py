"""Activation and movement adversaries.

Activation policies decide which robots act each round (FSYNC all,
SSYNC any nonempty subset, SEQ exactly one); movement policies decide
where a move stops inside the legal interval [min(delta, d), d].  All
built-in randomized policies are seeded and fairness-forced, so every
robot is activated within a bounded window no matter how unlucky the
draws are.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .geometry import Point, dist


class SchedulerError(ValueError):
    pass


FSYNC = "fsync"
SSYNC_RANDOM = "ssync-random"
SEQ_RANDOM = "seq-random"
SEQ_ROUND_ROBIN = "seq-round-robin"
SCRIPTED = "scripted"
INTERACTIVE = "interactive"

ACTIVATION_KINDS = (
    FSYNC, SSYNC_RANDOM, SEQ_RANDOM, SEQ_ROUND_ROBIN, SCRIPTED, INTERACTIVE,
)

RIGID = "rigid"
WORST_CASE_DELTA = "worst-case-delta"
RANDOM = "random"
MOVEMENT_SCRIPTED = "scripted"
MOVEMENT_INTERACTIVE = "interactive"

MOVEMENT_KINDS = (
    RIGID, WORST_CASE_DELTA, RANDOM, MOVEMENT_SCRIPTED, MOVEMENT_INTERACTIVE,
)


@dataclass
class FairnessLedger:
    """Tracks per-robot activation recency and epoch boundaries.

    An epoch boundary fires at the end of any round after which every
    robot has completed at least one cycle since the previous boundary.
    """

    robots: tuple[int, ...]
    window: int
    last_activation: dict[int, int] = field(default_factory=dict)
    seen_since_boundary: set[int] = field(default_factory=set)
    epoch: int = 0
    epoch_marks: list[int] = field(default_factory=list)

    def __post_init__(self):
        for r in self.robots:
            self.last_activation.setdefault(r, 0)

    def starved(self, round_index: int) -> list[int]:
        return sorted(
            r for r in self.robots
            if round_index - self.last_activation[r] >= self.window
        )

    def record(self, activated: Sequence[int], round_index: int) -> bool:
        for r in activated:
            self.last_activation[r] = round_index
            self.seen_since_boundary.add(r)
        if set(self.robots) <= self.seen_since_boundary:
            self.epoch += 1
            self.epoch_marks.append(round_index)
            self.seen_since_boundary.clear()
            return True
        return False


def epoch_boundary(ledger: FairnessLedger, activated: Sequence[int],
                   round_index: int) -> tuple[bool, int]:
    fired = ledger.record(activated, round_index)
    return fired, ledger.epoch


@dataclass(frozen=True)
class ActivationSpec:
    kind: str
    seed: Optional[int] = None
    script: Optional[tuple[int, ...]] = None
    window: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ACTIVATION_KINDS:
            raise SchedulerError(f"unknown activation kind {self.kind!r}")
        if self.kind == SCRIPTED and not self.script:
            raise SchedulerError("scripted activation needs a script")


class ActivationPolicy:
    """One policy instance drives exactly one run."""

    def __init__(self, spec: ActivationSpec, robots: Sequence[int]):
        if not robots:
            raise SchedulerError("no robots to schedule")
        self.spec = spec
        self.robots = tuple(sorted(robots))
        n = len(self.robots)
        default_window = n if spec.kind == SEQ_ROUND_ROBIN else 50 * n
        self.window = spec.window or default_window
        self._rng = random.Random(spec.seed if spec.seed is not None else 0)
        self._cursor = 0

    def next_activation(self, round_index: int, ledger: FairnessLedger) -> list[int]:
        kind = self.spec.kind
        if kind == FSYNC:
            return list(self.robots)
        if kind == SEQ_ROUND_ROBIN:
            robot = self.robots[self._cursor % len(self.robots)]
            self._cursor += 1
            return [robot]
        if kind == SEQ_RANDOM:
            starved = ledger.starved(round_index)
            if starved:
                return [starved[0]]
            return [self._rng.choice(self.robots)]
        if kind == SSYNC_RANDOM:
            subset = [r for r in self.robots if self._rng.random() < 0.5]
            for r in ledger.starved(round_index):
                if r not in subset:
                    subset.append(r)
            if not subset:
                subset = [self._rng.choice(self.robots)]
            return sorted(subset)
        if kind == SCRIPTED:
            if self.spec.script and self._cursor < len(self.spec.script):
                robot = self.spec.script[self._cursor]
                self._cursor += 1
                if robot not in self.robots:
                    raise SchedulerError(f"scripted robot {robot} not in scenario")
                return [robot]
            # Script exhausted: keep the run fair with round-robin.
            robot = self.robots[self._cursor % len(self.robots)]
            self._cursor += 1
            return [robot]
        raise SchedulerError(
            "interactive activation is driven externally, not by the run loop"
        )


def next_activation(policy: ActivationPolicy, round_index: int,
                    robots: Sequence[int], ledger: FairnessLedger) -> list[int]:
    if not robots:
        raise SchedulerError("robots must be nonempty")
    return policy.next_activation(round_index, ledger)


@dataclass(frozen=True)
class MovementSpec:
    kind: str
    delta: float
    seed: Optional[int] = None
    script: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.kind not in MOVEMENT_KINDS:
            raise SchedulerError(f"unknown movement kind {self.kind!r}")
        if not (self.delta > 0.0 and math.isfinite(self.delta)):
            raise SchedulerError("delta must be a positive finite real")


class MovementPolicy:
    def __init__(self, spec: MovementSpec):
        self.spec = spec
        self.delta = spec.delta
        self._rng = random.Random(spec.seed if spec.seed is not None else 0)
        self._cursor = 0

    def decide_truncation(self, start: Point, intended: Point) -> float:
        d = dist(start, intended)
        lo = min(self.delta, d)
        kind = self.spec.kind
        if kind == RIGID:
            return d
        if kind == WORST_CASE_DELTA:
            return lo
        if kind == RANDOM:
            return lo + (d - lo) * self._rng.random()
        if kind == MOVEMENT_SCRIPTED:
            fraction = 1.0
            if self.spec.script and self._cursor < len(self.spec.script):
                fraction = self.spec.script[self._cursor]
            self._cursor += 1
            return max(lo, min(d, fraction * d))
        raise SchedulerError(
            "interactive movement is driven externally, not by the run loop"
        )


def decide_truncation(policy: MovementPolicy, start: Point, intended: Point) -> float:
    return policy.decide_truncation(start, intended)
