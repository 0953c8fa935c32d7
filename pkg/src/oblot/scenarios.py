"""Scenario documents: the JSON contract shared by the CLI and the session API.

The schema is strict (unknown keys are rejected) so that a typo cannot
silently weaken an adversary or a tolerance.  Field semantics:

  robots          list of [x, y] global start positions (multiplicities allowed)
  frames          per-robot {rotation, handedness, unit}, or "random", or
                  {"kind": "random", "unit_range": [lo, hi], "per_activation": bool}
  pattern         list of [x, y] target points (distinct)
  algorithm       seq-pf | seq-pf-small | seq-gathering | go-to-center-sec |
                  rendezvous | auto
  activation      {kind, seed?, script?, window?}
  movement        {kind, delta, seed?, script?}
  weak_detection  grant weak multiplicity bits to snapshots
  eps             geometric tolerance (delta must exceed 4*eps)
  max_rounds      optional hard horizon (default derived from the epoch bound)
  seed            master seed for frame randomization and derived streams
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Union

import jsonschema

from .algorithms import ALGORITHM_KINDS
from .geometry import Point, Tolerance, dist
from .model import FrameSpec
from .schedulers import ACTIVATION_KINDS, MOVEMENT_KINDS, ActivationSpec, MovementSpec


class ScenarioError(ValueError):
    pass


class SchemaViolation(ScenarioError):
    """Document shape is wrong (unknown keys, bad types, missing fields)."""


_POINT = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}

SCENARIO_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["robots", "pattern", "algorithm", "activation", "movement"],
    "properties": {
        "robots": {"type": "array", "items": _POINT, "minItems": 1},
        "frames": {
            "oneOf": [
                {"const": "random"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {
                        "kind": {"const": "random"},
                        "unit_range": {
                            "type": "array",
                            "items": {"type": "number", "exclusiveMinimum": 0},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                        "per_activation": {"type": "boolean"},
                    },
                },
                {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "properties": {
                            "rotation": {"type": "number"},
                            "handedness": {"enum": [1, -1]},
                            "unit": {"type": "number", "exclusiveMinimum": 0},
                        },
                    },
                },
            ]
        },
        "pattern": {"type": "array", "items": _POINT, "minItems": 1},
        "algorithm": {"enum": list(ALGORITHM_KINDS)},
        "activation": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": list(ACTIVATION_KINDS)},
                "seed": {"type": "integer"},
                "script": {"type": "array", "items": {"type": "integer"}},
                "window": {"type": "integer", "minimum": 1},
            },
        },
        "movement": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "delta"],
            "properties": {
                "kind": {"enum": list(MOVEMENT_KINDS)},
                "delta": {"type": "number", "exclusiveMinimum": 0},
                "seed": {"type": "integer"},
                "script": {"type": "array", "items": {"type": "number"}},
            },
        },
        "weak_detection": {"type": "boolean"},
        "eps": {"type": "number", "exclusiveMinimum": 0},
        "max_rounds": {"type": ["integer", "null"], "minimum": 1},
        "seed": {"type": "integer"},
    },
}


@dataclass(frozen=True)
class RandomFrames:
    unit_range: tuple[float, float] = (0.1, 10.0)
    per_activation: bool = False


@dataclass(frozen=True)
class Scenario:
    robots: tuple[Point, ...]
    pattern: tuple[Point, ...]
    algorithm: str
    activation: ActivationSpec
    movement: MovementSpec
    frames: Union[tuple[FrameSpec, ...], RandomFrames]
    weak_detection: bool = False
    eps: float = 1e-9
    max_rounds: Optional[int] = None
    seed: int = 0

    @property
    def tol(self) -> Tolerance:
        return Tolerance(self.eps)

    @property
    def delta(self) -> float:
        return self.movement.delta

    def validate(self) -> None:
        if len(self.robots) < len(self.pattern):
            raise ScenarioError(
                "trivial assumption violated: need at least as many robots "
                f"as pattern points ({len(self.robots)} < {len(self.pattern)})"
            )
        if self.movement.delta <= 4.0 * self.eps:
            raise ScenarioError("delta must exceed 4*eps")
        for p in list(self.robots) + list(self.pattern):
            if not (math.isfinite(p[0]) and math.isfinite(p[1])):
                raise ScenarioError(f"non-finite coordinate {p!r}")
        for i in range(len(self.pattern)):
            for j in range(i + 1, len(self.pattern)):
                if dist(self.pattern[i], self.pattern[j]) <= self.eps:
                    raise ScenarioError("pattern points must be distinct")
        if isinstance(self.frames, tuple) and len(self.frames) != len(self.robots):
            raise ScenarioError("frames list must match the robot count")
        if self.algorithm == "seq-gathering" and not self.weak_detection:
            raise ScenarioError("seq-gathering requires weak_detection")
        if self.algorithm == "auto" and len(self.pattern) == 1 and not self.weak_detection:
            raise ScenarioError("single-point patterns require weak_detection")


def scenario_from_doc(doc: dict) -> Scenario:
    """Validate a parsed JSON document and build the scenario."""
    try:
        jsonschema.validate(doc, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as e:
        path = "/".join(str(k) for k in e.absolute_path) or "(root)"
        raise SchemaViolation(f"schema violation at {path}: {e.message}") from None
    act = doc["activation"]
    mov = doc["movement"]
    frames_doc = doc.get("frames", "random")
    frames: Union[tuple[FrameSpec, ...], RandomFrames]
    if frames_doc == "random":
        frames = RandomFrames()
    elif isinstance(frames_doc, dict):
        rng = frames_doc.get("unit_range", [0.1, 10.0])
        frames = RandomFrames(
            unit_range=(float(rng[0]), float(rng[1])),
            per_activation=bool(frames_doc.get("per_activation", False)),
        )
    else:
        frames = tuple(
            FrameSpec(
                rotation=float(f.get("rotation", 0.0)),
                handedness=int(f.get("handedness", 1)),
                unit=float(f.get("unit", 1.0)),
            )
            for f in frames_doc
        )
    scenario = Scenario(
        robots=tuple((float(x), float(y)) for x, y in doc["robots"]),
        pattern=tuple((float(x), float(y)) for x, y in doc["pattern"]),
        algorithm=doc["algorithm"],
        activation=ActivationSpec(
            kind=act["kind"],
            seed=act.get("seed"),
            script=tuple(act["script"]) if act.get("script") else None,
            window=act.get("window"),
        ),
        movement=MovementSpec(
            kind=mov["kind"],
            delta=float(mov["delta"]),
            seed=mov.get("seed"),
            script=tuple(float(f) for f in mov["script"]) if mov.get("script") else None,
        ),
        frames=frames,
        weak_detection=bool(doc.get("weak_detection", False)),
        eps=float(doc.get("eps", 1e-9)),
        max_rounds=doc.get("max_rounds"),
        seed=int(doc.get("seed", 0)),
    )
    scenario.validate()
    return scenario


def scenario_to_doc(s: Scenario) -> dict:
    if isinstance(s.frames, RandomFrames):
        frames_doc: object = {
            "kind": "random",
            "unit_range": list(s.frames.unit_range),
            "per_activation": s.frames.per_activation,
        }
    else:
        frames_doc = [
            {"rotation": f.rotation, "handedness": f.handedness, "unit": f.unit}
            for f in s.frames
        ]
    doc = {
        "robots": [[p[0], p[1]] for p in s.robots],
        "frames": frames_doc,
        "pattern": [[p[0], p[1]] for p in s.pattern],
        "algorithm": s.algorithm,
        "activation": {"kind": s.activation.kind},
        "movement": {"kind": s.movement.kind, "delta": s.movement.delta},
        "weak_detection": s.weak_detection,
        "eps": s.eps,
        "max_rounds": s.max_rounds,
        "seed": s.seed,
    }
    if s.activation.seed is not None:
        doc["activation"]["seed"] = s.activation.seed
    if s.activation.script:
        doc["activation"]["script"] = list(s.activation.script)
    if s.activation.window:
        doc["activation"]["window"] = s.activation.window
    if s.movement.seed is not None:
        doc["movement"]["seed"] = s.movement.seed
    if s.movement.script:
        doc["movement"]["script"] = list(s.movement.script)
    return doc


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ScenarioError(f"invalid JSON: {e}") from None
    return scenario_from_doc(doc)
