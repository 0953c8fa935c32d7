"""Execution engine: Look-Compute-Move rounds under adversarial policies,
epoch accounting, termination detection, bound verification, and the two
impossibility demos (the fully-synchronous separation trap and the mirror
construction against detection-free gathering).
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import algorithms
from .algorithms import (
    CapabilityError,
    Decision,
    STAGE_EQUALIZE,
    STAGE_FINAL,
    STAGE_INIT,
    STAGE_UNIQUE_MAX,
    compute,
    resolve_algorithm,
)
from .geometry import Point, Tolerance, dist, is_similar, smallest_enclosing_circle
from .model import (
    Configuration,
    FrameSpec,
    LocalFrame,
    Snapshot,
    frame_at,
    resolve_move,
    take_snapshot,
)
from .scenarios import RandomFrames, Scenario, ScenarioError, scenario_to_doc
from .schedulers import (
    INTERACTIVE,
    ActivationPolicy,
    FairnessLedger,
    MovementPolicy,
)


class EngineError(RuntimeError):
    pass


@dataclass
class MoveRecord:
    robot: int
    snapshot: "Snapshot"
    local_destination: Point
    intended: Point
    actual: Point
    truncated: bool
    stage: str
    branch: str = ""

    def to_doc(self) -> dict:
        return {
            "robot": self.robot,
            "snapshot": _snapshot_digest(self.snapshot),
            "local_destination": list(self.local_destination),
            "intended": list(self.intended),
            "actual": list(self.actual),
            "truncated": self.truncated,
            "stage": self.stage,
            "branch": self.branch,
        }


@dataclass
class RoundEvent:
    round_index: int
    activated: list[int]
    moves: list[MoveRecord]
    q_count: int
    epoch: int
    epoch_boundary: bool
    stage: str

    def to_doc(self) -> dict:
        return {
            "type": "round",
            "round": self.round_index,
            "activated": self.activated,
            "moves": [m.to_doc() for m in self.moves],
            "q_count": self.q_count,
            "epoch": self.epoch,
            "epoch_boundary": self.epoch_boundary,
            "stage": self.stage,
        }


@dataclass
class BoundReport:
    name: str
    inputs: dict
    bound: Optional[float]
    observed: float
    passed: bool
    conclusive: bool = True

    def to_doc(self) -> dict:
        return {
            "name": self.name,
            "inputs": self.inputs,
            "bound": self.bound,
            "observed": self.observed,
            "passed": self.passed,
            "conclusive": self.conclusive,
        }


@dataclass
class Trace:
    scenario_doc: dict
    events: list[RoundEvent] = field(default_factory=list)
    epoch_marks: list[int] = field(default_factory=list)
    q_count_series: list[int] = field(default_factory=list)
    formed_at: Optional[int] = None
    epochs_observed: int = 0
    rho_after_init: Optional[float] = None
    max_pair_length: Optional[float] = None
    warnings: list[str] = field(default_factory=list)

    def events_digest(self) -> str:
        # Hash of the round events only: an interactive session and its
        # scripted CLI replay carry different scenario blocks but must
        # agree on this digest.
        h = hashlib.sha256()
        for e in self.events:
            h.update(canonical_json(e.to_doc()).encode())
        return h.hexdigest()

    def summary_doc(self, bounds: Optional[list[BoundReport]] = None) -> dict:
        return {
            "type": "summary",
            "formed": self.formed_at is not None,
            "formed_at": self.formed_at,
            "rounds": len(self.events),
            "epochs": self.epochs_observed,
            "rho_after_init": self.rho_after_init,
            "max_pair_length": self.max_pair_length,
            "warnings": self.warnings,
            "bounds": [b.to_doc() for b in (bounds or [])],
            "trace_hash": self.events_digest(),
        }


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _snapshot_digest(snap: Snapshot) -> str:
    doc = {
        "points": [list(p) for p in snap.points],
        "bits": list(snap.multiplicity_bits) if snap.multiplicity_bits else None,
        "self": snap.self_index,
    }
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()[:16]


class Run:
    """One serialized execution; drives itself from policies or is stepped
    externally (interactive sessions)."""

    def __init__(self, scenario: Scenario):
        scenario.validate()
        self.scenario = scenario
        self.tol = scenario.tol
        self.algorithm = resolve_algorithm(scenario.algorithm, len(scenario.pattern))
        self.config = Configuration(
            {i: p for i, p in enumerate(scenario.robots)}, self.tol
        )
        self.robot_ids = tuple(sorted(self.config.positions))
        self._rng = random.Random(scenario.seed)
        self._frame_specs = self._resolve_frames()
        self._per_activation_frames = (
            isinstance(scenario.frames, RandomFrames)
            and scenario.frames.per_activation
        )
        self.activation = (
            ActivationPolicy(scenario.activation, self.robot_ids)
            if scenario.activation.kind != INTERACTIVE
            else None
        )
        self.fairness_window = (
            self.activation.window if self.activation is not None
            else (scenario.activation.window or 50 * len(self.robot_ids))
        )
        self.movement = MovementPolicy(scenario.movement)
        self.ledger = FairnessLedger(self.robot_ids, self.fairness_window)
        self.trace = Trace(scenario_doc=scenario_to_doc(scenario))
        self.round_index = 0
        self._config_gen = 0
        self._decision_cache: dict[tuple[int, int], tuple[Snapshot, Decision]] = {}
        self._unique_pair_seen = False
        self._init_done = False
        self._center_movers: set[int] = set()
        self._note_stage_inputs()

    # -- frames ------------------------------------------------------------

    def _resolve_frames(self) -> dict[int, FrameSpec]:
        sc = self.scenario
        if isinstance(sc.frames, tuple):
            return {i: f for i, f in enumerate(sc.frames)}
        rho0 = smallest_enclosing_circle(list(sc.robots), self.tol).radius or 1.0
        lo, hi = sc.frames.unit_range
        rng = random.Random((sc.seed, "frames").__str__())
        specs = {}
        for i in sorted(range(len(sc.robots))):
            specs[i] = FrameSpec(
                rotation=rng.uniform(0.0, 2.0 * math.pi),
                handedness=rng.choice((1, -1)),
                unit=rng.uniform(lo, hi) * rho0,
            )
        return specs

    def frame_for(self, robot: int) -> LocalFrame:
        spec = self._frame_specs[robot]
        if self._per_activation_frames:
            rng = random.Random((self.scenario.seed, "frame", robot,
                                 self.round_index).__str__())
            lo, hi = self.scenario.frames.unit_range
            rho0 = smallest_enclosing_circle(
                list(self.scenario.robots), self.tol
            ).radius or 1.0
            spec = FrameSpec(
                rotation=rng.uniform(0.0, 2.0 * math.pi),
                handedness=rng.choice((1, -1)),
                unit=rng.uniform(lo, hi) * rho0,
            )
        return frame_at(spec, self.config.position(robot))

    # -- per-robot computation ----------------------------------------------

    def snapshot_for(self, robot: int) -> Snapshot:
        return take_snapshot(
            self.config, robot, self.frame_for(robot),
            self.scenario.weak_detection, self.tol,
        )

    def decision_for(self, robot: int) -> tuple[Snapshot, Decision]:
        key = (self._config_gen, robot)
        if not self._per_activation_frames and key in self._decision_cache:
            return self._decision_cache[key]
        snap = self.snapshot_for(robot)
        decision = compute(self.algorithm, snap, self.scenario.pattern, self.tol)
        if not self._per_activation_frames:
            self._decision_cache[key] = (snap, decision)
        return snap, decision

    def preview(self, robot: int) -> dict:
        """Destination and legal truncation interval, without mutating state."""
        snap, decision = self.decision_for(robot)
        frame = self.frame_for(robot)
        intended = frame.to_global(decision.destination)
        intended = self._snap_destination(intended)
        start = self.config.position(robot)
        d = dist(start, intended)
        lo = min(self.scenario.delta, d)
        path = decision.info.get("path")
        if path is not None and decision.info.get("walker") == snap.self_point:
            path_global = [list(frame.to_global(p)) for p in path]
        else:
            path_global = None
        return {
            "robot": robot,
            "destination": list(intended),
            "interval": [lo, d],
            "stage": decision.stage,
            "path": path_global,
        }

    def _snap_destination(self, p: Point) -> Point:
        """Snap near-coincident destinations onto existing distinct points.

        Finite precision must not leave a formation forever eps-short; the
        engine guarantees delta > 4*eps so a snapped final hop completes.
        """
        for q in self.config.distinct_points:
            if dist(p, q) <= self.tol.eps:
                return q
        return p

    # -- stepping ------------------------------------------------------------

    def step_round(self, activated: Sequence[int],
                   stop_decider: Optional[Callable[[int, Point, Point], float]] = None
                   ) -> RoundEvent:
        """Execute one synchronous round: all activated robots snapshot the
        start-of-round configuration, then all moves commit together."""
        self.round_index += 1
        planned = []
        for robot in sorted(activated):
            snap, decision = self.decision_for(robot)
            frame = self.frame_for(robot)
            intended = self._snap_destination(frame.to_global(decision.destination))
            start = self.config.position(robot)
            if stop_decider is not None:
                stop = stop_decider(robot, start, intended)
            else:
                stop = self.movement.decide_truncation(start, intended)
            outcome = resolve_move(start, intended, stop, self.scenario.delta, self.tol)
            planned.append((robot, snap, decision, outcome))
        moves = {}
        records = []
        for robot, snap, decision, outcome in planned:
            actual = outcome.actual
            moves[robot] = actual
            records.append(MoveRecord(
                robot=robot,
                snapshot=snap,
                local_destination=decision.destination,
                intended=outcome.intended,
                actual=actual,
                truncated=outcome.truncated,
                stage=decision.stage,
                branch=str(decision.info.get("branch", "")),
            ))
        changed = any(
            rec.actual != self.config.position(rec.robot) for rec in records
        )
        if changed:
            self.config = self.config.moved(moves)
            self._config_gen += 1
        self._watch_center_convergence(records)
        boundary = self.ledger.record(sorted(activated), self.round_index)
        stage = records[0].stage if records else ""
        event = RoundEvent(
            round_index=self.round_index,
            activated=sorted(activated),
            moves=records,
            q_count=len(self.config.distinct_points),
            epoch=self.ledger.epoch,
            epoch_boundary=boundary,
            stage=stage,
        )
        self.trace.events.append(event)
        self.trace.q_count_series.append(event.q_count)
        if boundary:
            self.trace.epoch_marks.append(self.round_index)
        self._note_stage_inputs()
        return event

    def _watch_center_convergence(self, records: list[MoveRecord]) -> None:
        # Two interior robots drifting toward the center at once is legal per
        # the per-robot rule but worth surfacing in the trace.
        for rec in records:
            if rec.branch == "to-center" and rec.truncated:
                self._center_movers.add(rec.robot)
            else:
                self._center_movers.discard(rec.robot)
        if len(self._center_movers) > 1 and not any(
            w.startswith("concurrent-center") for w in self.trace.warnings
        ):
            self.trace.warnings.append(
                f"concurrent-center: robots {sorted(self._center_movers)} "
                "moved center-ward in overlapping rounds"
            )

    def _note_stage_inputs(self) -> None:
        m = len(self.config.distinct_points)
        k = len(self.scenario.pattern)
        if not self._init_done and m >= k:
            self._init_done = True
            self.trace.rho_after_init = smallest_enclosing_circle(
                self.config.distinct_points, self.tol
            ).radius
        if (self.algorithm == algorithms.SEQ_PF_SMALL and not self._unique_pair_seen
                and m >= k):
            from .algorithms import _max_pairs
            length, pairs = _max_pairs(self.config.distinct_points, self.tol)
            if len(pairs) == 1:
                self._unique_pair_seen = True
                self.trace.max_pair_length = length

    # -- termination ----------------------------------------------------------

    def formed(self) -> bool:
        pts = list(self.config.distinct_points)
        if self.algorithm in (algorithms.SEQ_GATHERING, algorithms.GO_TO_CENTER_SEC,
                              algorithms.RENDEZVOUS):
            return len(pts) == 1
        return len(pts) == len(self.scenario.pattern) and is_similar(
            pts, self.scenario.pattern, self.tol
        )

    def quiescent(self) -> bool:
        for robot in self.robot_ids:
            snap, decision = self.decision_for(robot)
            if not decision.stays(snap.self_point, self.tol):
                return False
        return True

    def formed_and_quiescent(self) -> bool:
        return self.formed() and self.quiescent()

    def default_max_rounds(self) -> int:
        n = len(self.robot_ids)
        rho = self.trace.rho_after_init
        if rho is None:
            rho = smallest_enclosing_circle(
                self.config.distinct_points, self.tol
            ).radius
        rho = max(rho, self.scenario.delta)
        bound = 2 * (n + 1) * math.ceil(rho / self.scenario.delta) + 2
        return max(1000, 10 * n * bound)

    def drive(self) -> Trace:
        """Run to completion under the scenario's own policies."""
        if self.activation is None:
            raise EngineError("interactive scenarios must be stepped externally")
        cap = self.scenario.max_rounds or self.default_max_rounds()
        while self.round_index < cap:
            if self.formed_and_quiescent():
                self.trace.formed_at = self.round_index
                break
            activated = self.activation.next_activation(
                self.round_index + 1, self.ledger
            )
            self.step_round(activated)
        else:
            if self.formed_and_quiescent():
                self.trace.formed_at = self.round_index
        self.trace.epochs_observed = self.ledger.epoch + (
            1 if self.ledger.seen_since_boundary else 0
        )
        self.trace.epoch_marks = list(self.ledger.epoch_marks)
        return self.trace


def run(scenario: Scenario) -> Trace:
    return Run(scenario).drive()


def check_formed_and_quiescent(run_state: Run) -> bool:
    return run_state.formed_and_quiescent()


# ---------------------------------------------------------------------------
# Bound verification
# ---------------------------------------------------------------------------

def _stage_epoch_count(events: list[RoundEvent], robots: Sequence[int],
                       stage: str) -> int:
    """Epochs consumed by a stage, re-anchored at each contiguous span.

    An epoch is the shortest window in which every robot completes a
    cycle; spans of the same stage are measured independently and summed.
    """
    robot_set = set(robots)
    total = 0
    seen: set[int] = set()
    in_span = False
    for e in events:
        if e.stage == stage:
            if not in_span:
                in_span = True
                seen = set()
            seen.update(e.activated)
            if robot_set <= seen:
                total += 1
                seen = set()
        else:
            if in_span and seen:
                total += 1
            in_span = False
            seen = set()
    if in_span and seen:
        total += 1
    return total


def verify_bound(trace: Trace, scenario: Scenario) -> list[BoundReport]:
    """Compare observed epoch counts with the worst-case stage and total bounds."""
    n = len(scenario.robots)
    delta = scenario.delta
    algorithm = resolve_algorithm(scenario.algorithm, len(scenario.pattern))
    reports: list[BoundReport] = []
    conclusive = trace.formed_at is not None
    events = trace.events[: (len(trace.events) if not conclusive else None)]
    if conclusive:
        events = [e for e in trace.events if e.round_index <= trace.formed_at]
    robots = list(range(n))

    if algorithm == algorithms.SEQ_PF:
        rho = trace.rho_after_init
        if rho is None:
            reports.append(BoundReport(
                "seq-pf-total", {"n": n, "delta": delta}, None,
                trace.epochs_observed, False, conclusive=False,
            ))
            return reports
        steps = math.ceil(rho / delta)
        total_bound = 2 * (n + 1) * steps + 2
        reports.append(BoundReport(
            "seq-pf-total",
            {"n": n, "rho": rho, "delta": delta, "ceil": steps},
            total_bound, trace.epochs_observed,
            conclusive and trace.epochs_observed <= total_bound, conclusive,
        ))
        for name, stage, bound in (
            ("initialization", STAGE_INIT, 1),
            ("leader-configuration", algorithms.STAGE_LEADER, steps + 1),
            ("partial-pattern-formation", algorithms.STAGE_PARTIAL, 2 * n * steps),
            ("finalization", STAGE_FINAL, steps),
        ):
            observed = _stage_epoch_count(events, robots, stage)
            reports.append(BoundReport(
                f"seq-pf-{name}", {"rho": rho, "delta": delta, "n": n},
                bound, observed, observed <= bound, conclusive,
            ))
    elif algorithm == algorithms.SEQ_PF_SMALL:
        length = trace.max_pair_length
        if length is None:
            reports.append(BoundReport(
                "seq-pf-small-total", {"n": n, "delta": delta}, None,
                trace.epochs_observed, False, conclusive=False,
            ))
            return reports
        steps = math.ceil(length / delta)
        total_bound = 2 * max(n - 2, 0) * steps + 2
        reports.append(BoundReport(
            "seq-pf-small-total",
            {"n": n, "max_pair": length, "delta": delta, "ceil": steps},
            total_bound, trace.epochs_observed,
            conclusive and trace.epochs_observed <= total_bound, conclusive,
        ))
    else:
        reports.append(BoundReport(
            "no-bound", {"algorithm": algorithm}, None,
            trace.epochs_observed, True, conclusive,
        ))
    return reports


# ---------------------------------------------------------------------------
# Impossibility demos
# ---------------------------------------------------------------------------

@dataclass
class DemoVerdict:
    name: str
    holds: bool
    rounds: int
    detail: dict

    def to_doc(self) -> dict:
        return {
            "demo": self.name,
            "verdict": self.holds,
            "rounds": self.rounds,
            "detail": self.detail,
        }


def _translation_key(points: Sequence[Point], counts: Sequence[int]) -> tuple:
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return tuple(sorted(
        (round(p[0] - cx, 9), round(p[1] - cy, 9), c)
        for p, c in zip(points, counts)
    ))


def demo_fsync_trap(pattern: Sequence[Point], start: Sequence[Point],
                    rounds: int, algorithm: str = algorithms.SEQ_PF,
                    eps: float = 1e-9) -> DemoVerdict:
    """Fully synchronous trap: with shared frames, rigid moves and identical
    robots, co-located robots can never separate, so |Q| never grows and a
    pattern larger than |Q(0)| is never formed.

    The run is fast-forwarded once the configuration repeats modulo
    translation (the dynamics are translation-equivariant).
    """
    tol = Tolerance(eps)
    config = Configuration({i: (float(x), float(y)) for i, (x, y) in enumerate(start)},
                           tol)
    q0 = len(config.distinct_points)
    if q0 >= len(pattern):
        raise EngineError(
            "fsync trap needs |Q(0)| < |pattern| and at least one multiplicity"
        )
    if all(c == 1 for c in config.counts):
        raise EngineError("fsync trap needs at least one multiplicity")
    frame = FrameSpec()  # identical shared frames
    kind = resolve_algorithm(algorithm, len(pattern))
    seen: dict[tuple, int] = {}
    executed = 0
    q_max = q0
    formed = False
    for r in range(1, rounds + 1):
        key = _translation_key(config.distinct_points, config.counts)
        if key in seen:
            break  # cycle modulo translation: the suffix repeats forever
        seen[key] = r
        executed = r
        moves = {}
        decisions: dict[Point, Point] = {}
        for robot in sorted(config.positions):
            own = config.position(robot)
            if own not in decisions:
                snap = take_snapshot(config, robot, frame_at(frame, own), False, tol)
                decision = compute(kind, snap, pattern, tol)
                decisions[own] = frame_at(frame, own).to_global(decision.destination)
            moves[robot] = decisions[own]
        config = config.moved(moves)
        q_now = len(config.distinct_points)
        q_max = max(q_max, q_now)
        if q_now > q0:
            break
        if len(config.distinct_points) == len(pattern) and is_similar(
            config.distinct_points, pattern, tol
        ):
            formed = True
            break
    holds = q_max <= q0 and not formed
    return DemoVerdict(
        name="fsync-trap",
        holds=holds,
        rounds=executed,
        detail={
            "q0": q0,
            "q_max": q_max,
            "formed": formed,
            "cycle_detected": executed < rounds,
            "algorithm": kind,
        },
    )


NAIVE_STAY = "stay"
NAIVE_GO_TO_OTHER = "go-to-other"
NAIVE_GO_TO_MIDPOINT = "go-to-midpoint"
NAIVE_CANDIDATES = (NAIVE_STAY, NAIVE_GO_TO_OTHER, NAIVE_GO_TO_MIDPOINT)


def naive_candidate(kind: str) -> Callable[[Snapshot], Point]:
    def stay(snap: Snapshot) -> Point:
        return snap.self_point

    def go_to_other(snap: Snapshot) -> Point:
        others = [p for p in snap.points if p != snap.self_point]
        if len(snap.points) == 2:
            return others[0]
        return snap.self_point

    def go_to_midpoint(snap: Snapshot) -> Point:
        others = [p for p in snap.points if p != snap.self_point]
        if not others:
            return snap.self_point
        own = snap.self_point
        nearest = min(others, key=lambda p: (dist(own, p), p))
        return ((own[0] + nearest[0]) / 2.0, (own[1] + nearest[1]) / 2.0)

    table = {
        NAIVE_STAY: stay,
        NAIVE_GO_TO_OTHER: go_to_other,
        NAIVE_GO_TO_MIDPOINT: go_to_midpoint,
    }
    if kind not in table:
        raise EngineError(f"unknown naive candidate {kind!r}")
    return table[kind]


def demo_mirror_gathering(candidate: Callable[[Snapshot], Point], rounds: int,
                          n: int = 3, eps: float = 1e-9,
                          separation: float = 1.0,
                          delta: Optional[float] = None) -> DemoVerdict:
    """Mirror scenario: point A holds a multiplicity, frames at A and B are
    reflexive, and the candidate computes without multiplicity bits.

    The candidate's two-point decision is classified (stay, switch to the
    other point, or step elsewhere).  For the switching class the adversary
    plays the sequence that swaps the sides forever (letting those moves
    complete); for anything else it exercises its truncation power and
    stops every long move after delta, which starves contraction-style
    candidates.  The verdict reports whether at least two distinct points
    persisted for the whole horizon.
    """
    if n < 3:
        raise EngineError("mirror demo needs at least 3 robots")
    tol = Tolerance(eps)
    if delta is None:
        delta = separation * 1e-5
    a: Point = (0.0, 0.0)
    b: Point = (separation, 0.0)
    positions = {i: a for i in range(n - 1)}
    positions[n - 1] = b
    config = Configuration(positions, tol)
    frames = {
        i: FrameSpec(rotation=0.0, handedness=1, unit=1.0) for i in range(n - 1)
    }
    frames[n - 1] = FrameSpec(rotation=math.pi, handedness=-1, unit=1.0)

    def local_decision(robot: int) -> Point:
        frame = frame_at(frames[robot], config.position(robot))
        snap = take_snapshot(config, robot, frame, False, tol)
        return frame.to_global(candidate(snap))

    probe = local_decision(0)
    if dist(probe, a) <= tol.eps:
        action = "act1-stay"
    elif dist(probe, b) <= tol.eps:
        action = "act2-switch"
    else:
        action = "act3-elsewhere"

    min_q = len(config.distinct_points)
    executed = 0
    if action == "act1-stay":
        executed = rounds  # nothing ever moves; |Q| is frozen
    elif action == "act2-switch":
        # Swap all robots but one from A, then all from B, then the last.
        schedule: list[int] = list(range(n - 2)) + [n - 1, n - 2]
        pos = 0
        for r in range(1, rounds + 1):
            robot = schedule[pos % len(schedule)]
            pos += 1
            target = local_decision(robot)
            config = config.moved({robot: target})
            min_q = min(min_q, len(config.distinct_points))
            executed = r
            if min_q < 2:
                break
    else:
        for r in range(1, rounds + 1):
            robot = (r - 1) % n
            start = config.position(robot)
            target = local_decision(robot)
            outcome = resolve_move(
                start, target, min(delta, dist(start, target)), delta, tol
            )
            config = config.moved({robot: outcome.actual})
            min_q = min(min_q, len(config.distinct_points))
            executed = r
            if min_q < 2:
                break
    return DemoVerdict(
        name="mirror-gathering",
        holds=min_q >= 2,
        rounds=executed,
        detail={"action": action, "min_q": min_q, "n": n, "delta": delta},
    )


def demo_mirror_control(rounds: int = 5000, n: int = 3,
                        eps: float = 1e-9) -> DemoVerdict:
    """Control run: the real gathering algorithm, with weak bits granted,
    gathers from the same mirror start."""
    from .schedulers import ActivationSpec, MovementSpec

    scenario = Scenario(
        robots=tuple([(0.0, 0.0)] * (n - 1) + [(1.0, 0.0)]),
        pattern=((0.0, 0.0),),
        algorithm=algorithms.SEQ_GATHERING,
        activation=ActivationSpec(kind="seq-round-robin"),
        movement=MovementSpec(kind="rigid", delta=0.05),
        frames=tuple(FrameSpec() for _ in range(n)),
        weak_detection=True,
        eps=eps,
        max_rounds=rounds,
        seed=7,
    )
    trace = run(scenario)
    return DemoVerdict(
        name="mirror-gathering-control",
        holds=trace.formed_at is not None,
        rounds=len(trace.events),
        detail={"gathered": trace.formed_at is not None},
    )
