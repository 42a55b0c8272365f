"""Deterministic tick-based scenario execution.

Each tick: maybe one random source event, then an automatic
reconfiguration check when the sources changed, then an elastic step,
then flow evaluation under the current blocking penalties, then
metrics.  Everything is driven by named substreams of one seed, so a
rerun with the same config is bit-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PatternViolationError
from .generate import random_member
from .grid import Coord, GridWord, format_word, parse_word
from .organism import (FlowReport, Source, SourceSet, TreeTopology,
                       derive_topology, evaluate_flow)
from .patterns import TR, accepts_tiling
from .reconfig import (ElasticConfig, RentedSet, apply_move_mapped, best_move,
                       elastic_step_full, predicted_flow,
                       reconfigure_until_stable)


@dataclass(frozen=True)
class ScenarioConfig:
    grid_width: int = 12
    grid_height: int = 12
    ticks: int = 100
    source_event_prob: float = 0.2
    fmax: float = 10000.0
    initial_word: GridWord | None = None
    initial_word_cells: int = 22
    initial_sources: tuple[Source, ...] | None = None
    source_count_mean: float = 3.0
    source_power_range: tuple[float, float] = (100.0, 1000.0)
    reconfig_cost_percent: float = 0.0
    elastic: ElasticConfig | None = None
    reconfig_policy: str = "auto"
    avg_flow_window: int = 10
    word_placement: str = "topRight"  # topRight | center, generated words
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.source_event_prob <= 1.0:
            raise ValueError("sourceEventProb must be a probability")
        if self.ticks < 1:
            raise ValueError("ticks must be at least 1")
        lo, hi = self.source_power_range
        if lo > hi:
            raise ValueError("sourcePowerRange must be ordered")
        if self.reconfig_policy not in ("off", "auto"):
            raise ValueError("reconfigPolicy must be off or auto")

    @property
    def bounds(self) -> tuple[int, int]:
        return (self.grid_height, self.grid_width)

    def block_duration(self) -> int:
        return math.ceil(self.reconfig_cost_percent * self.ticks)


@dataclass
class TickRow:
    tick: int
    root_flow: float
    avg_flow: float
    benefit: float
    event: str


@dataclass
class SimState:
    tick: int
    word: GridWord
    topology: TreeTopology
    sources: SourceSet
    rented: RentedSet
    blocked_until: dict[Coord, int]
    rng_events: np.random.Generator
    rows: list[TickRow] = field(default_factory=list)
    flow_window: list[float] = field(default_factory=list)
    benefit_total: float = 0.0
    reconfig_count: int = 0
    sources_changed: bool = True
    force_reconfig: bool = False
    elastic_enabled: bool = True
    policy: str = "auto"
    last_report: FlowReport | None = None

    def blocked_now(self) -> frozenset[Coord]:
        return frozenset(c for c, until in self.blocked_until.items()
                         if self.tick < until)


def _check_bounds(word: GridWord, bounds: tuple[int, int]) -> GridWord:
    h, w = bounds
    r0, c0, r1, c1 = word.bounds()
    if r0 < 0 or c0 < 0 or r1 >= h or c1 >= w:
        raise ValueError("initial word does not fit the grid")
    return word


def place_word(word: GridWord, bounds: tuple[int, int],
               placement: str = "topRight") -> GridWord:
    """Position a generated word.  The root cone covers rows below and
    columns west of the root, so the top-right corner puts the whole
    grid in reach; centered placement leaves slack on all sides."""
    h, w = bounds
    word = word.anchored()
    _, _, r1, c1 = word.bounds()
    if r1 >= h or c1 >= w:
        raise ValueError("initial word does not fit the grid")
    if placement == "center":
        return word.translate((h - 1 - r1) // 2, (w - 1 - c1) // 2)
    return word.translate(0, (w - 1) - c1)


def draw_sources(cfg: ScenarioConfig, rng: np.random.Generator) -> SourceSet:
    count = max(1, int(rng.poisson(cfg.source_count_mean)))
    lo, hi = cfg.source_power_range
    sources = []
    for _ in range(count):
        pos = (int(rng.integers(cfg.grid_height)),
               int(rng.integers(cfg.grid_width)))
        sources.append(Source(pos, float(rng.uniform(lo, hi))))
    return SourceSet(tuple(sources))


def initial_state(cfg: ScenarioConfig) -> SimState:
    ss = np.random.SeedSequence(cfg.seed)
    events_seed, init_seed = ss.spawn(2)
    rng_init = np.random.default_rng(init_seed)
    if cfg.initial_word is not None:
        word = _check_bounds(cfg.initial_word, cfg.bounds)
    else:
        word = place_word(random_member(TR, cfg.initial_word_cells,
                                        rng_init, cfg.bounds),
                          cfg.bounds, cfg.word_placement)
    if not accepts_tiling(word, TR.automaton):
        raise PatternViolationError("initial word is not a tree word")
    if cfg.initial_sources is not None:
        sources = SourceSet(tuple(cfg.initial_sources))
    else:
        sources = draw_sources(cfg, rng_init)
    return SimState(
        tick=0,
        word=word,
        topology=derive_topology(word),
        sources=sources,
        rented=RentedSet(),
        blocked_until={},
        rng_events=np.random.default_rng(events_seed),
        elastic_enabled=cfg.elastic is not None,
        policy=cfg.reconfig_policy,
    )


def _fmt(value: float) -> str:
    return repr(round(value, 6))


def _source_event(state: SimState, cfg: ScenarioConfig) -> str | None:
    rng = state.rng_events
    if rng.random() >= cfg.source_event_prob:
        return None
    kind = ("add", "remove", "modify")[int(rng.integers(3))]
    lo, hi = cfg.source_power_range
    if kind == "add":
        pos = (int(rng.integers(cfg.grid_height)),
               int(rng.integers(cfg.grid_width)))
        power = float(rng.uniform(lo, hi))
        state.sources = state.sources.add(Source(pos, power))
        state.sources_changed = True
        new_id = state.sources.ids[-1]
        return f"add#{new_id}@{pos[0]}:{pos[1]}={_fmt(power)}"
    if not len(state.sources):
        return "none"
    pick = state.sources.ids[int(rng.integers(len(state.sources)))]
    if kind == "remove":
        state.sources = state.sources.remove(pick)
        state.sources_changed = True
        return f"remove#{pick}"
    power = float(rng.uniform(lo, hi))
    state.sources = state.sources.modify(pick, power)
    state.sources_changed = True
    return f"modify#{pick}={_fmt(power)}"


def _remap_blocked(blocked: dict[Coord, int],
                   remap: dict[Coord, Coord]) -> dict[Coord, int]:
    return {remap.get(c, c): t for c, t in blocked.items()}


def tick(state: SimState, cfg: ScenarioConfig) -> SimState:
    """Advance one tick in place; returns the same state object."""
    events = []
    evt = _source_event(state, cfg)
    if evt:
        events.append(evt)

    # The changed flag stays up until a check accepts no move, so one
    # source event drives moves on consecutive ticks until stable.
    run_check = state.force_reconfig or (state.policy == "auto"
                                         and state.sources_changed)
    if run_check:
        forced = state.force_reconfig
        state.force_reconfig = False
        found = best_move(state.word, state.sources, cfg.fmax, cfg.bounds)
        accept = found is not None
        if not accept:
            state.sources_changed = False
        if accept:
            move, _ = found
            state.word, remap = apply_move_mapped(state.word, move)
            state.topology = derive_topology(state.word)
            state.blocked_until = _remap_blocked(state.blocked_until, remap)
            state.rented = state.rented.remap(remap)
            new_root = remap[move.subtree_root]
            duration = cfg.block_duration()
            if duration > 0:
                state.blocked_until[new_root] = state.tick + duration
            state.reconfig_count += 1
            events.append(
                f"move:{move.subtree_root[0]}:{move.subtree_root[1]}->"
                f"{new_root[0]}:{new_root[1]}")
        elif forced:
            events.append("reconfig-skipped")

    if state.elastic_enabled and cfg.elastic is not None:
        word2, rented2, remap, evt2 = elastic_step_full(
            state.word, state.rented, state.sources, cfg.fmax, cfg.elastic,
            cfg.bounds)
        if evt2:
            state.word = word2
            state.rented = rented2
            state.topology = derive_topology(word2)
            state.blocked_until = _remap_blocked(state.blocked_until, remap)
            events.append(evt2)

    report = evaluate_flow(state.topology, state.sources, cfg.fmax,
                           state.blocked_now())
    state.last_report = report
    state.flow_window.append(report.root_flow)
    if len(state.flow_window) > cfg.avg_flow_window:
        state.flow_window.pop(0)
    avg = sum(state.flow_window) / len(state.flow_window)
    if cfg.elastic is not None:
        unit = cfg.elastic.benefit_per_unit_flow
        cost = state.rented.total_cost(cfg.elastic)
    else:
        unit, cost = 1.0, 0.0
    state.benefit_total += report.root_flow * unit - cost
    state.rows.append(TickRow(state.tick, report.root_flow, avg,
                              state.benefit_total, ";".join(events)))
    state.tick += 1
    return state


@dataclass
class MetricsReport:
    rows: list[TickRow]
    mean_root_flow: float
    final_benefit: float
    reconfig_count: int

    def to_csv(self) -> str:
        lines = ["tick,rootFlow,avgFlow,benefit,event"]
        for row in self.rows:
            lines.append(f"{row.tick},{row.root_flow!r},{row.avg_flow!r},"
                         f"{row.benefit!r},{row.event}")
        return "\n".join(lines) + "\n"


def report_of(state: SimState) -> MetricsReport:
    rows = state.rows
    mean = sum(r.root_flow for r in rows) / len(rows) if rows else 0.0
    final_benefit = rows[-1].benefit if rows else 0.0
    return MetricsReport(list(rows), mean, final_benefit,
                         state.reconfig_count)


def run_scenario(cfg: ScenarioConfig) -> MetricsReport:
    state = initial_state(cfg)
    for _ in range(cfg.ticks):
        tick(state, cfg)
    return report_of(state)


def find_reference_optimal(cfg: ScenarioConfig, samples: int,
                           rng: np.random.Generator | None = None,
                           max_steps: int = 100):
    """Monte Carlo reference: one fixed random tree, many source draws,
    each stabilized; the best (tree, sources, flow) is the reference."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed).spawn(3)[2])
    tree = place_word(random_member(TR, cfg.initial_word_cells, rng,
                                    cfg.bounds), cfg.bounds,
                      cfg.word_placement)
    best = None
    for _ in range(samples):
        sources = draw_sources(cfg, rng)
        stabilized, _ = reconfigure_until_stable(tree, sources, cfg.fmax,
                                                 max_steps, cfg.bounds)
        flow = predicted_flow(stabilized, sources, cfg.fmax)
        if best is None or flow > best[2]:
            best = (stabilized, sources, flow)
    return best


def shuffle_word(word: GridWord, rng: np.random.Generator,
                 bounds: tuple[int, int], moves: int) -> GridWord:
    """Randomize a tree by seeded valid moves; the tag multiset is
    preserved by construction."""
    from .reconfig import apply_move, random_move
    for _ in range(moves):
        move = random_move(word, rng, bounds)
        if move is None:
            break
        word = apply_move(word, move)
    return word


# ---------------------------------------------------------------------------
# Scenario files (JSON) mirroring the config field names.
# ---------------------------------------------------------------------------

_KEYS = {
    "gridWidth": "grid_width",
    "gridHeight": "grid_height",
    "ticks": "ticks",
    "sourceEventProb": "source_event_prob",
    "fmax": "fmax",
    "sourcePowerRange": "source_power_range",
    "reconfigCostPercent": "reconfig_cost_percent",
    "reconfigPolicy": "reconfig_policy",
    "avgFlowWindow": "avg_flow_window",
    "wordPlacement": "word_placement",
    "seed": "seed",
}


def scenario_from_json(text: str) -> ScenarioConfig:
    data = json.loads(text)
    return scenario_from_dict(data)


def scenario_from_dict(data: dict) -> ScenarioConfig:
    kwargs = {}
    for key, attr in _KEYS.items():
        if key in data:
            value = data[key]
            kwargs[attr] = tuple(value) if attr == "source_power_range" else value
    word = data.get("initialWord")
    if isinstance(word, str):
        kwargs["initial_word"] = parse_word(word)
    elif isinstance(word, dict):
        kwargs["initial_word_cells"] = int(word.get("cells", 22))
    sources = data.get("initialSources")
    if isinstance(sources, list):
        kwargs["initial_sources"] = tuple(
            Source((int(s["row"]), int(s["col"])), float(s["power"]))
            for s in sources)
    elif isinstance(sources, dict):
        if "countMean" in sources:
            kwargs["source_count_mean"] = float(sources["countMean"])
        if "powerRange" in sources:
            kwargs["source_power_range"] = tuple(sources["powerRange"])
    elastic = data.get("elastic")
    if elastic:
        limit = elastic.get("rentLimit", 0)
        cost = elastic.get("nodeCost", 1.0)
        kwargs["elastic"] = ElasticConfig(
            benefit_per_unit_flow=float(elastic.get("benefitPerUnitFlow", 1.0)),
            node_cost=tuple(sorted(cost.items())) if isinstance(cost, dict)
            else float(cost),
            rent_limit=tuple(sorted(limit.items())) if isinstance(limit, dict)
            else int(limit))
    return ScenarioConfig(**kwargs)


def _format_word_absolute(word: GridWord) -> str:
    """Text form padded so coordinates survive a parse round trip."""
    r0, c0, r1, c1 = word.bounds()
    if r0 < 0 or c0 < 0:
        raise ValueError("absolute text form needs non-negative coordinates")
    rows = []
    for r in range(0, r1 + 1):
        rows.append("".join(word.tag_at((r, c)) or "*" for c in range(0, c1 + 1)))
    return "\n".join(rows)


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    data = {key: getattr(cfg, attr) for key, attr in _KEYS.items()}
    data["sourcePowerRange"] = list(cfg.source_power_range)
    if cfg.initial_word is not None:
        data["initialWord"] = _format_word_absolute(cfg.initial_word)
    else:
        data["initialWord"] = {"pattern": "tr", "cells": cfg.initial_word_cells}
    if cfg.initial_sources is not None:
        data["initialSources"] = [
            {"row": s.pos[0], "col": s.pos[1], "power": s.power}
            for s in cfg.initial_sources]
    else:
        data["initialSources"] = {"countMean": cfg.source_count_mean,
                                  "powerRange": list(cfg.source_power_range)}
    if cfg.elastic is not None:
        e = cfg.elastic
        data["elastic"] = {
            "benefitPerUnitFlow": e.benefit_per_unit_flow,
            "nodeCost": dict(e.node_cost) if isinstance(e.node_cost, tuple)
            else e.node_cost,
            "rentLimit": dict(e.rent_limit) if isinstance(e.rent_limit, tuple)
            else e.rent_limit,
        }
    return data
