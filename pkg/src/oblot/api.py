"""HTTP session service: a human plays the adversarial scheduler.

Sessions wrap the same Run object the CLI drives, so an interactive
session replayed through scripted policies produces an identical event
stream.  Robot ids appear only on this adversary-facing surface; the
algorithms never see them.

Endpoints (all JSON):
  POST   /sessions                    create (201) -> {id, state}
  GET    /sessions/{id}               state
  POST   /sessions/{id}/step          {robot, stop_fraction} -> {state, event}
  GET    /sessions/{id}/what-if/{robot}   non-mutating preview
  GET    /sessions/{id}/trace         full trace (ndjson)
  DELETE /sessions/{id}               drop the session
"""

from __future__ import annotations

import itertools
import threading
import time
from dataclasses import replace
from typing import Optional

from fastapi import FastAPI, HTTPException, Response
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from . import algorithms
from .engine import Run, canonical_json, verify_bound
from .geometry import smallest_enclosing_circle, leader_angular_sequence, \
    pattern_sequences
from .scenarios import ScenarioError, SchemaViolation, scenario_from_doc
from .schedulers import INTERACTIVE

SESSION_TTL_SECONDS = 3600.0


class StepBody(BaseModel):
    robot: int
    stop_fraction: float = Field(ge=0.0, le=1.0)


class Session:
    def __init__(self, sid: str, run: Run):
        self.id = sid
        self.run = run
        self.lock = threading.Lock()
        self.last_access = time.monotonic()

    def touch(self):
        self.last_access = time.monotonic()


class SessionStore:
    def __init__(self, ttl: float = SESSION_TTL_SECONDS):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._counter = itertools.count(1)
        self.ttl = ttl

    def create(self, run: Run) -> Session:
        with self._lock:
            self._purge()
            sid = f"s{next(self._counter):06d}"
            session = Session(sid, run)
            self._sessions[sid] = session
            return session

    def get(self, sid: str) -> Session:
        with self._lock:
            self._purge()
            session = self._sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        session.touch()
        return session

    def drop(self, sid: str) -> bool:
        with self._lock:
            return self._sessions.pop(sid, None) is not None

    def _purge(self):
        now = time.monotonic()
        dead = [k for k, s in self._sessions.items()
                if now - s.last_access > self.ttl]
        for k in dead:
            del self._sessions[k]


def session_state(run: Run) -> dict:
    """Adversary-facing state: the human may see everything the engine knows."""
    config = run.config
    tol = run.tol
    points = list(config.distinct_points)
    sec = smallest_enclosing_circle(points, tol)
    lam = leader_angular_sequence(points, None, tol, sec=sec)
    pattern_placed = None
    if run.algorithm == algorithms.SEQ_PF and lam is not None:
        profile = pattern_sequences(run.scenario.pattern, tol)
        gamma = algorithms.overlap(points, profile, sec, tol)
        if gamma is not None:
            pattern_placed = [list(p) for p in gamma.placed_pattern]
    first = run.robot_ids[0]
    _, decision = run.decision_for(first)
    formed = run.formed()
    quiescent = formed and run.quiescent()
    starved = run.ledger.starved(run.round_index + 1)
    return {
        "round": run.round_index,
        "epoch": run.ledger.epoch,
        "robots": {str(r): list(config.position(r)) for r in run.robot_ids},
        "q_points": [list(p) for p in points],
        "census": [
            {"point": list(p), "count": c, "multiplicity": c > 1}
            for p, c in zip(points, config.counts)
        ],
        "sec": {"center": list(sec.center), "radius": sec.radius},
        "lambda": None if lam is None else {
            "theta1": lam.theta1,
            "inner": list(lam.inner_point),
            "boundary": list(lam.boundary_point),
            "cw_dir": lam.cw_dir,
        },
        "pattern": [list(p) for p in run.scenario.pattern],
        "pattern_placed": pattern_placed,
        "stage": decision.stage,
        "formed": formed,
        "quiescent": quiescent,
        "forced_robot": starved[0] if starved else None,
        "fairness_window": run.fairness_window,
        "delta": run.scenario.delta,
    }


def create_app(static_dir: Optional[str] = None, ttl: float = SESSION_TTL_SECONDS
               ) -> FastAPI:
    app = FastAPI(title="oblot adversary playground", version="0.1.0")
    store = SessionStore(ttl=ttl)
    app.state.store = store

    @app.post("/sessions", status_code=201)
    def create_session(doc: dict):
        try:
            doc = dict(doc)
            if "activation" in doc and isinstance(doc["activation"], dict):
                doc["activation"] = {**doc["activation"], "kind": INTERACTIVE}
            else:
                doc.setdefault("activation", {"kind": INTERACTIVE})
            scenario = scenario_from_doc(doc)
        except SchemaViolation as e:
            raise HTTPException(status_code=400, detail=str(e))
        except ScenarioError as e:
            raise HTTPException(status_code=422, detail=str(e))
        run = Run(scenario)
        session = store.create(run)
        return {"id": session.id, "state": session_state(run)}

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        session = store.get(sid)
        with session.lock:
            return {"id": sid, "state": session_state(session.run)}

    @app.get("/sessions/{sid}/what-if/{robot}")
    def what_if(sid: str, robot: int):
        session = store.get(sid)
        with session.lock:
            run = session.run
            if robot not in run.robot_ids:
                raise HTTPException(status_code=404, detail="unknown robot")
            return run.preview(robot)

    @app.post("/sessions/{sid}/step")
    def step(sid: str, body: StepBody):
        session = store.get(sid)
        with session.lock:
            run = session.run
            if body.robot not in run.robot_ids:
                raise HTTPException(status_code=404, detail="unknown robot")
            if run.formed_and_quiescent():
                raise HTTPException(status_code=409,
                                    detail="session already formed and quiescent")
            starved = run.ledger.starved(run.round_index + 1)
            if starved and body.robot != starved[0]:
                raise HTTPException(
                    status_code=423,
                    detail={
                        "message": "fairness window exceeded",
                        "forced_robot": starved[0],
                    },
                )
            fraction = body.stop_fraction

            def decide(robot, start, intended):
                from .geometry import dist
                d = dist(start, intended)
                return max(min(run.scenario.delta, d), fraction * d)

            event = run.step_round([body.robot], decide)
            return {"state": session_state(run), "event": event.to_doc()}

    @app.get("/sessions/{sid}/trace")
    def get_trace(sid: str):
        session = store.get(sid)
        with session.lock:
            run = session.run
            trace = run.trace
            trace.epochs_observed = run.ledger.epoch + (
                1 if run.ledger.seen_since_boundary else 0
            )
            if run.formed_and_quiescent() and trace.formed_at is None:
                trace.formed_at = run.round_index
            bounds = verify_bound(trace, run.scenario)
            lines = [canonical_json({"type": "scenario",
                                     "scenario": trace.scenario_doc})]
            lines += [canonical_json(e.to_doc()) for e in trace.events]
            lines.append(canonical_json(trace.summary_doc(bounds)))
            return PlainTextResponse(
                "\n".join(lines) + "\n", media_type="application/x-ndjson"
            )

    @app.delete("/sessions/{sid}", status_code=204)
    def delete_session(sid: str):
        if not store.drop(sid):
            raise HTTPException(status_code=404, detail="unknown session")
        return Response(status_code=204)

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
