"""Oblivious mobile robots on the plane under adversarial schedulers.

An executable environment for the Look-Compute-Move model: pattern
formation and gathering programs, activation/movement adversaries, a
bound-verifying engine, impossibility demos, a CLI, and an interactive
session API for playing the scheduler by hand.
"""

from .geometry import (
    Circle,
    Tolerance,
    circular_decomposition,
    co_radial,
    is_similar,
    leader_angular_sequence,
    on_boundary,
    pattern_sequences,
    radiangular_distance,
    smallest_enclosing_circle,
)
from .model import Configuration, FrameSpec, LocalFrame, Snapshot, take_snapshot
from .scenarios import Scenario, load_scenario, scenario_from_doc, scenario_to_doc
from .engine import Run, Trace, run, verify_bound

__all__ = [
    "Circle",
    "Tolerance",
    "circular_decomposition",
    "co_radial",
    "is_similar",
    "leader_angular_sequence",
    "on_boundary",
    "pattern_sequences",
    "radiangular_distance",
    "smallest_enclosing_circle",
    "Configuration",
    "FrameSpec",
    "LocalFrame",
    "Snapshot",
    "take_snapshot",
    "Scenario",
    "load_scenario",
    "scenario_from_doc",
    "scenario_to_doc",
    "Run",
    "Trace",
    "run",
    "verify_bound",
]

__version__ = "0.1.0"
