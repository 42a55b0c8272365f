"""Command line interface.

Exit codes: 0 success/accepted, 1 rejected word or failed check,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .contour import contour_of, format_contour
from .engine import (ScenarioConfig, run_scenario, scenario_from_json,
                     scenario_to_dict)
from .errors import NoMemberError, VorgError, WordParseError
from .experiments import (experiment_dynamic_vs_static, experiment_elastic,
                          experiment_reconfig_ratio)
from .generate import generate_words
from .grid import format_word, parse_word
from .patterns import PATTERNS, accepts_product, accepts_tiling
from .reconfig import ElasticConfig


def _print_config(label: str, data: dict) -> None:
    print(f"# {label}: {json.dumps(data, sort_keys=True)}")


def cmd_validate(args) -> int:
    spec = PATTERNS[args.pattern]
    try:
        word = parse_word(Path(args.file).read_text())
    except WordParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    by_tiling = accepts_tiling(word, spec.automaton)
    by_product = accepts_product(word, spec)
    print(f"tiling:  {'accept' if by_tiling else 'reject'}")
    print(f"product: {'accept' if by_product else 'reject'}")
    if by_tiling != by_product:
        print("recognizers disagree; this is a bug", file=sys.stderr)
    return 0 if by_tiling and by_product else 1


def cmd_generate(args) -> int:
    spec = PATTERNS[args.pattern]
    _print_config("generate", {"pattern": args.pattern, "cells": args.cells,
                               "mode": args.mode, "seed": args.seed,
                               "count": args.count})
    try:
        if args.mode == "random":
            rng = np.random.default_rng(args.seed)
            from .generate import random_member
            words = [random_member(spec, args.cells, rng)
                     for _ in range(args.count)]
        else:
            words = generate_words(spec, args.cells, args.seed, "enumerate")
    except NoMemberError as exc:
        print(f"no member: {exc}", file=sys.stderr)
        return 1
    text = "\n\n".join(format_word(w) for w in words) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {len(words)} words to {args.out}")
    else:
        print(text, end="")
    return 0


def cmd_contour(args) -> int:
    try:
        word = parse_word(Path(args.file).read_text())
    except WordParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    print(format_contour(contour_of(word)))
    return 0


def _load_scenario(args) -> ScenarioConfig:
    cfg = scenario_from_json(Path(args.scenario).read_text())
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.ticks is not None:
        overrides["ticks"] = args.ticks
    if args.prob is not None:
        overrides["source_event_prob"] = args.prob
    if args.fmax is not None:
        overrides["fmax"] = args.fmax
    if args.cost_percent is not None:
        overrides["reconfig_cost_percent"] = args.cost_percent
    if getattr(args, "elastic", None):
        overrides["elastic"] = ElasticConfig(10.0, 1.0, 10)
    if overrides:
        from dataclasses import replace
        cfg = replace(cfg, **overrides)
    return cfg


def cmd_simulate(args) -> int:
    try:
        cfg = _load_scenario(args)
    except (OSError, ValueError, VorgError) as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    _print_config("simulate", scenario_to_dict(cfg))
    report = run_scenario(cfg)
    csv_text = report.to_csv()
    if args.out:
        Path(args.out).write_text(csv_text)
        print(f"wrote {len(report.rows)} rows to {args.out}")
    else:
        print(csv_text, end="")
    print(f"# meanRootFlow={report.mean_root_flow!r} "
          f"finalBenefit={report.final_benefit!r} "
          f"reconfigs={report.reconfig_count}", file=sys.stderr)
    return 0


def _band(value: float, lo: float, hi: float, label: str) -> bool:
    ok = lo <= value <= hi
    print(f"{'PASS' if ok else 'WARN'} {label}: {value:.3f} "
          f"(band [{lo}, {hi}])")
    return ok


def cmd_experiment(args) -> int:
    _print_config("experiment", {"kind": args.kind, "trials": args.trials,
                                 "seed": args.seed})
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    summary: dict = {"kind": args.kind, "trials": args.trials,
                     "seed": args.seed}
    rows: list[str] = []
    if args.kind == "ratio":
        res = experiment_reconfig_ratio(args.trials, seed=args.seed)
        print(f"mean flow ratio vs reference: {res.mean_ratio:.3f} "
              "(reported reference value 0.96)")
        print(f"mean improving moves: {res.mean_steps:.2f} "
              "(reported reference value 3.69)")
        _band(res.mean_ratio, 0.90, float("inf"), "mean ratio")
        _band(res.mean_steps, 0.0, 8.0, "mean steps")
        summary.update(meanRatio=res.mean_ratio, meanSteps=res.mean_steps,
                       stdRatio=float(np.std(res.ratios)))
        rows = ["trial,ratio,steps"] + [
            f"{i},{r!r},{s!r}" for i, (r, s) in
            enumerate(zip(res.ratios, res.steps))]
    elif args.kind == "table1":
        res = experiment_dynamic_vs_static(trials=args.trials, seed=args.seed)
        bands = {0.01: (30.0, 150.0), 0.05: (8.0, 60.0), 0.10: (2.0, 30.0)}
        summary["rows"] = []
        for row in res.rows:
            pct = 100 * row.mean_improvement
            lo, hi = bands.get(row.cost_percent, (0.0, float("inf")))
            _band(pct, lo, hi, f"cost {row.cost_percent:g}")
            summary["rows"].append({"costPercent": row.cost_percent,
                                    "meanImprovement": row.mean_improvement,
                                    "std": float(np.std(row.improvements))})
        rows = ["costPercent,trial,improvement"] + [
            f"{row.cost_percent},{i},{v!r}"
            for row in res.rows for i, v in enumerate(row.improvements)]
    elif args.kind == "elastic":
        res = experiment_elastic(trials=args.trials, seed=args.seed)
        pct = 100 * res.mean_improvement
        print(f"mean benefit improvement: {pct:.1f}% "
              "(reported reference value ~55%)")
        _band(pct, 20.0, float("inf"), "mean improvement %")
        summary.update(meanImprovement=res.mean_improvement,
                       std=float(np.std(res.improvements)))
        rows = ["trial,improvement"] + [
            f"{i},{v!r}" for i, v in enumerate(res.improvements)]
    else:
        print(f"unknown experiment {args.kind}", file=sys.stderr)
        return 2
    if out_dir:
        (out_dir / f"{args.kind}_summary.json").write_text(
            json.dumps(summary, indent=2) + "\n")
        (out_dir / f"{args.kind}_trials.csv").write_text("\n".join(rows) + "\n")
        print(f"wrote summary and per-trial rows to {out_dir}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    cfg = None
    if args.scenario:
        cfg = scenario_from_json(Path(args.scenario).read_text())
    app = create_app(cfg, log_path=args.log)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vorg",
        description="Adaptive grid organisms: validate and generate 2D "
                    "pattern words, simulate tree collectors, run the "
                    "evaluation experiments, serve the interactive UI.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a word file against a pattern")
    p.add_argument("file")
    p.add_argument("--pattern", choices=sorted(PATTERNS), default="tr")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("generate", help="enumerate or sample pattern members")
    p.add_argument("--pattern", choices=sorted(PATTERNS), default="tr")
    p.add_argument("--cells", type=int, default=6)
    p.add_argument("--mode", choices=["enumerate", "random"],
                   default="enumerate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1,
                   help="words to sample in random mode")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("contour", help="print the boundary contour of a word")
    p.add_argument("file")
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("simulate", help="run a scenario file")
    p.add_argument("scenario")
    p.add_argument("--seed", type=int)
    p.add_argument("--ticks", type=int)
    p.add_argument("--prob", type=float)
    p.add_argument("--fmax", type=float)
    p.add_argument("--cost-percent", dest="cost_percent", type=float)
    p.add_argument("--elastic", action="store_true",
                   help="enable a default elastic config")
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("experiment", help="run an evaluation experiment")
    p.add_argument("kind", choices=["ratio", "table1", "elastic"])
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="directory for summary JSON and trial CSV")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("serve", help="run the interactive simulation service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int,
                   default=int(os.environ.get("VORG_PORT", "8000")))
    p.add_argument("--scenario", help="scenario JSON to preload")
    p.add_argument("--log", help="session log path (ndjson)")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except VorgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
