"""Command-line entry point.

Subcommands:
  run    execute one scenario file, write a JSONL trace
  batch  run a campaign of generated scenarios, aggregate bound margins
  demo   fsync-trap | mirror-gathering
  serve  host the interactive session API (optionally with UI assets)

Exit codes: 0 formed / verdict holds, 1 error, 2 horizon reached unformed.
The environment variable OBLOT_SEED overrides scenario seeds for CI.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from . import engine
from .engine import canonical_json, demo_fsync_trap, demo_mirror_gathering, \
    demo_mirror_control, naive_candidate, verify_bound
from .scenarios import Scenario, ScenarioError, load_scenario, scenario_to_doc
from .schedulers import ActivationSpec, MovementSpec

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_HORIZON = 2


def _apply_seed_override(scenario: Scenario) -> Scenario:
    seed = os.environ.get("OBLOT_SEED")
    if seed is None:
        return scenario
    s = int(seed)
    scenario = replace(scenario, seed=s)
    scenario = replace(scenario, activation=replace(scenario.activation, seed=s))
    if scenario.movement.kind == "random":
        scenario = replace(scenario, movement=replace(scenario.movement, seed=s))
    return scenario


def write_trace(trace: engine.Trace, bounds, out_path: str) -> None:
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json({"type": "scenario", "scenario": trace.scenario_doc}))
        fh.write("\n")
        for event in trace.events:
            fh.write(canonical_json(event.to_doc()))
            fh.write("\n")
        fh.write(canonical_json(trace.summary_doc(bounds)))
        fh.write("\n")


def cmd_run(args) -> int:
    try:
        scenario = _apply_seed_override(load_scenario(args.scenario))
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    trace = engine.run(scenario)
    bounds = verify_bound(trace, scenario)
    write_trace(trace, bounds, args.out)
    summary = trace.summary_doc(bounds)
    print(canonical_json(summary))
    if trace.formed_at is None:
        return EXIT_HORIZON
    return EXIT_OK


def _run_one_batch_job(doc: dict) -> dict:
    from .scenarios import scenario_from_doc

    scenario = scenario_from_doc(doc)
    trace = engine.run(scenario)
    bounds = verify_bound(trace, scenario)
    total = next((b for b in bounds if b.name.endswith("total")), None)
    return {
        "formed": trace.formed_at is not None,
        "rounds": len(trace.events),
        "epochs": trace.epochs_observed,
        "bound": total.bound if total else None,
        "margin": (total.bound - total.observed) if total and total.bound else None,
        "within_bound": all(b.passed for b in bounds),
        "trace_hash": trace.events_digest(),
    }


def generate_batch(spec: dict) -> list[dict]:
    """Expand a batch spec into scenario documents.

    Spec keys: count, algorithm, n_range [lo, hi], k_range [lo, hi],
    delta_ratio (delta = rho0 * ratio), activation kinds list, seed.
    """
    rng = random.Random(spec.get("seed", 0))
    docs = []
    count = spec.get("count", 10)
    n_lo, n_hi = spec.get("n_range", [5, 12])
    k_lo, k_hi = spec.get("k_range", [5, 8])
    kinds = spec.get("activation", ["seq-round-robin", "seq-random"])
    ratio = spec.get("delta_ratio", 0.05)
    algorithm = spec.get("algorithm", "auto")
    for i in range(count):
        k = rng.randint(k_lo, k_hi)
        n = rng.randint(max(n_lo, k), max(n_hi, k))
        pattern = _random_distinct_points(rng, k)
        m = rng.randint(max(2, min(n, k) - 2), n)
        distinct = _random_distinct_points(rng, m)
        robots = [list(distinct[j]) for j in range(m)]
        robots += [list(distinct[rng.randrange(m)]) for _ in range(n - m)]
        rng.shuffle(robots)
        rho0 = _rough_radius(robots)
        docs.append({
            "robots": robots,
            "frames": {"kind": "random", "unit_range": [0.3, 1.5]},
            "pattern": [list(p) for p in pattern],
            "algorithm": algorithm,
            "activation": {"kind": rng.choice(kinds), "seed": rng.randrange(2**31)},
            "movement": {"kind": "worst-case-delta", "delta": rho0 * ratio},
            "weak_detection": k == 1,
            "eps": 1e-9,
            "max_rounds": None,
            "seed": rng.randrange(2**31),
        })
    return docs


def _random_distinct_points(rng: random.Random, k: int, spread: float = 1.0):
    pts = []
    while len(pts) < k:
        p = (rng.uniform(-spread, spread), rng.uniform(-spread, spread))
        if all(math.hypot(p[0] - q[0], p[1] - q[1]) > 1e-3 for q in pts):
            pts.append(p)
    return pts


def _rough_radius(robots) -> float:
    xs = [p[0] for p in robots]
    ys = [p[1] for p in robots]
    return max(
        1e-6,
        0.5 * math.hypot(max(xs) - min(xs), max(ys) - min(ys)),
    ) or 1.0


def cmd_batch(args) -> int:
    try:
        with open(args.spec, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    groups = spec if isinstance(spec, list) else [spec]
    docs = []
    for g in groups:
        docs.extend(generate_batch(g))
    os.makedirs(args.out_dir, exist_ok=True)
    results = []
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one_batch_job, docs))
    else:
        for doc in docs:
            results.append(_run_one_batch_job(doc))
    table_path = os.path.join(args.out_dir, "batch_results.json")
    with open(table_path, "w", encoding="utf-8") as fh:
        json.dump(results, fh, indent=2)
    formed = sum(1 for r in results if r["formed"])
    within = sum(1 for r in results if r["within_bound"])
    print(f"{len(results)} runs: {formed} formed, {within} within bounds "
          f"-> {table_path}")
    ok = all(r["formed"] and r["within_bound"] for r in results)
    return EXIT_OK if ok else EXIT_HORIZON


def cmd_demo(args) -> int:
    if args.name == "fsync-trap":
        pattern = [(math.cos(2 * math.pi * i / 5), math.sin(2 * math.pi * i / 5))
                   for i in range(5)]
        start = [(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.3, 0.4)]
        verdict = demo_fsync_trap(pattern, start, rounds=args.rounds,
                                  algorithm=args.candidate or "seq-pf")
        print(canonical_json(verdict.to_doc()))
        return EXIT_OK if verdict.holds else EXIT_ERROR
    if args.name == "mirror-gathering":
        if args.grant_bits:
            verdict = demo_mirror_control(rounds=args.rounds)
            print(canonical_json(verdict.to_doc()))
            return EXIT_OK if verdict.holds else EXIT_ERROR
        kind = args.candidate or "go-to-other"
        verdict = demo_mirror_gathering(naive_candidate(kind), rounds=args.rounds)
        print(canonical_json(verdict.to_doc()))
        return EXIT_OK if verdict.holds else EXIT_ERROR
    print(f"error: unknown demo {args.name!r}", file=sys.stderr)
    return EXIT_ERROR


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    app = create_app(static_dir=args.static)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit:
        return EXIT_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oblot",
        description="Oblivious-robot pattern formation under adversarial schedulers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario file")
    p_run.add_argument("--scenario", required=True)
    p_run.add_argument("--out", default="trace.jsonl")
    p_run.set_defaults(func=cmd_run)

    p_batch = sub.add_parser("batch", help="run a generated campaign")
    p_batch.add_argument("--spec", required=True)
    p_batch.add_argument("--jobs", type=int, default=1)
    p_batch.add_argument("--out-dir", default="batch-out")
    p_batch.set_defaults(func=cmd_batch)

    p_demo = sub.add_parser("demo", help="run an impossibility demo")
    p_demo.add_argument("name", choices=["fsync-trap", "mirror-gathering"])
    p_demo.add_argument("--candidate", default=None)
    p_demo.add_argument("--grant-bits", action="store_true")
    p_demo.add_argument("--rounds", type=int, default=10000)
    p_demo.set_defaults(func=cmd_demo)

    p_serve = sub.add_parser("serve", help="serve the session API")
    p_serve.add_argument("--port", type=int, default=8008)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--static", default=None)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
