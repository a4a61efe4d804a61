"""
Modified Tangent Search Algorithm (mTSA)
========================================

Population-based search driven by tangent flights. Every agent turn runs
three phases on the agent:

1. exploration - a few coordinates take small tangent steps toward the best
   agent or, with probability 0.3, a large tangent flight
2. intensification - a best-directed move with decaying step, triggered
   mostly in the second half of the budget
3. escape - a rare full-range tangent jump out of the current basin

Each phase is followed by bound repair, one evaluation and greedy
replacement. The run stops exactly when the evaluation budget is spent.
"""

import logging
import math
from dataclasses import dataclass, field, fields
from typing import List, Mapping, Optional

import numpy as np

from errors import BudgetExhaustedError, ConfigError
from optimizer import (
    BestTracker,
    Candidate,
    EvaluationBudget,
    OptimizerResult,
    evaluate_budgeted,
    register_optimizer,
    repair_blend,
    repair_random,
)

_PROBABILITIES = (
    "large_flight_prob",
    "intensification_late_prob",
    "intensification_early_prob",
    "intensification_gate",
    "intensification_move_prob",
    "escape_prob",
    "escape_repair_mix",
    "restore_fraction_small",
    "restore_fraction_large",
)
_FLAGS = ("shared_repair_draw", "forced_index_per_coordinate", "record_trace")


@dataclass(frozen=True)
class MtsaParams:
    population_size: int = 40
    dim_flip_rate: Optional[float] = None  # 1.5 / dimension when unset
    large_flight_prob: float = 0.3
    intensification_late_prob: float = 0.7
    intensification_early_prob: float = 0.05
    intensification_gate: float = 0.5
    intensification_move_prob: float = 0.7
    escape_prob: float = 0.01
    escape_repair_mix: float = 0.8
    restore_fraction_small: float = 0.4
    restore_fraction_large: float = 0.2
    restore_small_max_dim: int = 4
    theta_scale: float = math.pi / 2.5
    # one uniform per side for all out-of-bounds coordinates of a move
    shared_repair_draw: bool = True
    forced_index_per_coordinate: bool = False
    record_trace: bool = False

    def __post_init__(self):
        if self.population_size < 2:
            raise ConfigError(f"population_size must be >= 2, got {self.population_size}")
        for name in _PROBABILITIES:
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value}")
        if self.dim_flip_rate is not None and not 0.0 <= self.dim_flip_rate <= 1.0:
            raise ConfigError(f"dim_flip_rate must lie in [0, 1], got {self.dim_flip_rate}")

    @classmethod
    def from_mapping(cls, values: Optional[Mapping] = None):
        """Build params from loosely typed config values (strings allowed)"""
        if isinstance(values, cls):
            return values
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in (values or {}).items():
            name = str(key).lower()
            if name not in known:
                raise ConfigError(f"Unknown mtsa parameter: {key}")
            kwargs[name] = _coerce(name, raw)
        return cls(**kwargs)

    def flip_rate(self, dimension):
        return self.dim_flip_rate if self.dim_flip_rate is not None else 1.5 / dimension

    def restore_count(self, dimension):
        fraction = (self.restore_fraction_small if dimension <= self.restore_small_max_dim
                    else self.restore_fraction_large)
        # half away from zero
        return int(math.floor(fraction * dimension + 0.5))


def _coerce(name, raw):
    if name in ("population_size", "restore_small_max_dim"):
        return int(raw)
    if name in _FLAGS:
        return raw if isinstance(raw, bool) else str(raw).strip().lower() in ("1", "true", "yes", "on")
    if name == "dim_flip_rate" and (raw is None or str(raw).strip().lower() in ("", "none", "auto")):
        return None
    return float(raw)


@dataclass
class MtsaState:
    population: List[Candidate]
    tracker: BestTracker
    budget: EvaluationBudget
    info: dict = field(default_factory=lambda: {
        "agent_turns": 0, "intensifications": 0, "escapes": 0})

    @property
    def best(self):
        return self.tracker.best


def _fes(budget):
    # ln(1 + FES) must stay positive when a step is called on a fresh budget
    return max(budget.consumed, 1)


def exploration_step(agent, best, budget, params, rng):
    """Coordinate-wise tangent moves.

    One index drawn before the loop is always eligible. With
    ``forced_index_per_coordinate`` a fresh index is drawn for every
    coordinate instead, so a turn may leave the agent unchanged.
    """
    x = agent.point.copy()
    optx = best.point
    dimension = x.size
    rate = params.flip_rate(dimension)
    forced = int(rng.integers(dimension))
    fes = _fes(budget)
    for jk in range(dimension):
        theta = rng.random() * params.theta_scale
        if params.forced_index_per_coordinate:
            forced = int(rng.integers(dimension))
        if not (rng.random() <= rate or jk == forced):
            continue
        if np.array_equal(optx, x):
            step = 0.1 * np.sign(rng.random() - 0.5) / np.log(1.0 + fes)
            x[jk] += step * np.tan(theta)
        else:
            step = 0.5 * np.sign(rng.random() - 0.5) * np.linalg.norm(optx - x)
            if rng.random() <= params.large_flight_prob:
                x[jk] += np.tan(rng.random() * np.pi)
            else:
                x[jk] += step * np.tan(theta)
    return x


def should_intensify(budget, params, rng):
    late = budget.consumed >= params.intensification_gate * budget.max_fes
    return ((rng.random() < params.intensification_late_prob and late)
            or rng.random() < params.intensification_early_prob)


def intensification_step(agent, best, budget, params, rng):
    """Best-directed move, then a random share of coordinates is put back"""
    x = agent.point.copy()
    saved = x.copy()
    optx = best.point
    dimension = x.size
    fes = _fes(budget)
    theta = rng.random() * params.theta_scale
    step = np.sign(rng.random() - 0.5) * np.linalg.norm(optx) * np.log(1.0 + 10.0 * dimension / fes)
    if np.array_equal(optx, x):
        x = optx + step * np.tan(theta) * (rng.random() * optx - x)
    elif rng.random() <= params.intensification_move_prob:
        x = optx + step * np.tan(theta) * (optx - x)
    else:
        sign = -1.0 + 2.0 * rng.random()
        rho = 15.0 * sign / np.log(1.0 + fes)
        x = x + rho * (optx - rng.random() * (optx - x))

    restored = rng.permutation(dimension)[:params.restore_count(dimension)]
    x[restored] = saved[restored]
    return x


def escape_step(agent, bounds, params, rng):
    """Full-range tangent jump, already repaired into the bounds"""
    lower, upper = bounds
    theta = rng.random() * np.pi
    with np.errstate(over="ignore", invalid="ignore"):
        moved = agent.point + np.tan(theta) * (upper - lower)
    shared = params.shared_repair_draw
    if rng.random() <= params.escape_repair_mix:
        return repair_random(moved, bounds, rng, shared)
    return repair_blend(moved, agent.point, bounds, rng, shared)


def _try_replace(state, handle, j, x):
    candidate = evaluate_budgeted(handle, state.budget, x)
    if candidate.fitness < state.population[j].fitness:
        state.population[j] = candidate
        state.tracker.observe(candidate, state.budget.consumed)


def optimize(handle, budget, params=None, seed=0):
    params = MtsaParams.from_mapping(params)
    if budget.exhausted:
        raise BudgetExhaustedError("mtsa needs at least one evaluation")
    rng = np.random.default_rng(seed)
    lower, upper = handle.bounds
    shared = params.shared_repair_draw
    start = budget.consumed

    tracker = BestTracker(record_trace=params.record_trace)
    population = []
    for _ in range(params.population_size):
        if budget.exhausted:
            break
        x = lower + (upper - lower) * rng.random(handle.dimension)
        candidate = evaluate_budgeted(handle, budget, x)
        population.append(candidate)
        tracker.observe(candidate, budget.consumed)
    state = MtsaState(population, tracker, budget)

    try:
        while not budget.exhausted:
            for j in range(len(population)):
                best = state.best
                state.info["agent_turns"] += 1

                x = exploration_step(population[j], best, budget, params, rng)
                with np.errstate(over="ignore", invalid="ignore"):
                    _try_replace(state, handle, j, repair_random(x, handle.bounds, rng, shared))

                if should_intensify(budget, params, rng):
                    state.info["intensifications"] += 1
                    with np.errstate(over="ignore", invalid="ignore"):
                        x = intensification_step(population[j], best, budget, params, rng)
                    _try_replace(state, handle, j, repair_random(x, handle.bounds, rng, shared))

                if rng.random() < params.escape_prob:
                    state.info["escapes"] += 1
                    _try_replace(state, handle, j, escape_step(population[j], handle.bounds, params, rng))
    except BudgetExhaustedError:
        pass

    logging.debug(f"mtsa {handle.function.value} d={handle.dimension} best={state.best.fitness} "
                  f"fes={budget.consumed} info={state.info}")
    return OptimizerResult(state.best, budget.consumed - start, seed, tracker.trace, dict(state.info))


@register_optimizer("mtsa")
def run_mtsa(handle, budget, seed, params=None):
    return optimize(handle, budget, params, seed)
