"""The three evaluation experiments.

All trials derive their randomness from (seed, trial) so runs are
reproducible and trials are independent.  Reference targets:
stabilization ratio about 0.96 in about 3.7 steps, dynamic-over-static
improvements falling with the reconfiguration cost, and a roughly 55%
benefit gain from elastic renting.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .engine import (ScenarioConfig, find_reference_optimal, run_scenario,
                     shuffle_word)
from .reconfig import ElasticConfig, predicted_flow, reconfigure_until_stable


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, trial)))


def _base_config(seed: int) -> ScenarioConfig:
    # 10x10 keeps a 20-25 cell tree within reach of drifting sources, so
    # the static baseline stays meaningful.
    return ScenarioConfig(grid_width=10, grid_height=10, ticks=100,
                          source_event_prob=0.2, fmax=10000.0, seed=seed)


@dataclass
class RatioResult:
    mean_ratio: float
    mean_steps: float
    ratios: list[float] = field(default_factory=list)
    steps: list[float] = field(default_factory=list)


def experiment_reconfig_ratio(trials: int, node_range=(20, 25), seed: int = 0,
                              samples: int = 10) -> RatioResult:
    """Stabilized flow of a shuffled tree relative to the reference
    optimum, plus the number of improving moves used."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    ratios, steps_list = [], []
    for trial in range(trials):
        rng = _trial_rng(seed, trial)
        cells = int(rng.integers(node_range[0], node_range[1] + 1))
        # Roomier grid: cramped bounds weaken the Monte Carlo reference.
        cfg = replace(_base_config(seed), grid_width=12, grid_height=12,
                      initial_word_cells=cells)
        opt_word, opt_sources, opt_flow = find_reference_optimal(
            cfg, samples=samples, rng=rng)
        shuffled = shuffle_word(opt_word, rng, cfg.bounds, moves=3 * cells)
        stabilized, steps = reconfigure_until_stable(
            shuffled, opt_sources, cfg.fmax, max_steps=100, bounds=cfg.bounds)
        ratios.append(predicted_flow(stabilized, opt_sources, cfg.fmax)
                      / opt_flow)
        steps_list.append(float(steps))
    return RatioResult(float(np.mean(ratios)), float(np.mean(steps_list)),
                       ratios, steps_list)


@dataclass
class CostRow:
    cost_percent: float
    mean_improvement: float
    improvements: list[float] = field(default_factory=list)


@dataclass
class DynamicStaticResult:
    rows: list[CostRow]


def experiment_dynamic_vs_static(cost_percents=(0.01, 0.05, 0.10),
                                 trials: int = 30, seed: int = 0,
                                 samples: int = 3) -> DynamicStaticResult:
    """Reconfiguring random tree vs the initially optimal static tree,
    on identical dynamic source streams, per reconfiguration cost."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    per_cost = {c: [] for c in cost_percents}
    for trial in range(trials):
        rng = _trial_rng(seed, trial)
        cells = int(rng.integers(20, 26))
        base = replace(_base_config(seed), grid_width=18, grid_height=18,
                       initial_word_cells=cells,
                       seed=int(rng.integers(2 ** 31)))
        opt_word, opt_sources, _ = find_reference_optimal(base, samples=samples,
                                                          rng=rng)
        shuffled = shuffle_word(opt_word, rng, base.bounds, moves=3 * cells)
        static_cfg = replace(base, initial_word=opt_word,
                             initial_sources=opt_sources.sources,
                             reconfig_policy="off")
        static_mean = run_scenario(static_cfg).mean_root_flow
        for cost in cost_percents:
            dynamic_cfg = replace(base, initial_word=shuffled,
                                  initial_sources=opt_sources.sources,
                                  reconfig_policy="auto",
                                  reconfig_cost_percent=cost)
            dynamic_mean = run_scenario(dynamic_cfg).mean_root_flow
            per_cost[cost].append((dynamic_mean - static_mean) / static_mean)
    rows = [CostRow(c, float(np.mean(v)), v) for c, v in per_cost.items()]
    return DynamicStaticResult(rows)


@dataclass
class ElasticResult:
    mean_improvement: float
    improvements: list[float] = field(default_factory=list)


def experiment_elastic(trials: int = 30, seed: int = 0, node_cost: float = 1.0,
                       fmax: float = 10000.0) -> ElasticResult:
    """Benefit with elastic renting on versus off; the per-flow benefit
    is ten times the per-node cost, rent budgets of 8 to 10 cells."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    improvements = []
    for trial in range(trials):
        rng = _trial_rng(seed, trial)
        cells = int(rng.integers(20, 26))
        limit = int(rng.integers(8, 11))
        run_seed = int(rng.integers(2 ** 31))
        benefit = 10.0 * node_cost
        # A denser source field on a roomier grid: rented chains earn
        # their keep by reaching sources the fixed multiset cannot.
        off_cfg = replace(_base_config(seed), grid_width=16, grid_height=16,
                          source_count_mean=10.0, initial_word_cells=cells,
                          seed=run_seed, fmax=fmax,
                          elastic=ElasticConfig(benefit, node_cost, 0))
        on_cfg = replace(off_cfg,
                         elastic=ElasticConfig(benefit, node_cost, limit))
        off = run_scenario(off_cfg).final_benefit
        on = run_scenario(on_cfg).final_benefit
        improvements.append((on - off) / off)
    return ElasticResult(float(np.mean(improvements)), improvements)
