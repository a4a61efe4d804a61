"""
Optimizer Core
==============

Black-box objective contract shared by every optimizer in the toolkit.

Key Features:
- Objective handles bound to one function, dimension and evaluation mode
- Evaluation budgets counted per call (max_fes = 10^4 * D by default)
- Bound repair by uniform redraw or by blending with the previous point
- Deterministic per-run seed derivation from one master seed
- A random-search baseline and a registry for pluggable optimizers

Plug-in contract: an optimizer is a callable
``(handle, budget, seed, params) -> OptimizerResult`` registered under a
name with ``@register_optimizer("name")``.
"""

import logging
import zlib
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

import benchmarks
from angles import Mode
from errors import BudgetExhaustedError, DimensionMismatchError, UnknownOptimizerError

DEFAULT_BUDGET_FACTOR = 10_000


@dataclass(frozen=True)
class ObjectiveHandle:
    function: benchmarks.FunctionId
    dimension: int
    mode: Mode
    lower: float
    upper: float
    noise_seed: int = 0

    @property
    def bounds(self):
        return self.lower, self.upper

    def new_context(self):
        """Fresh evaluation context; each run owns its own noise stream"""
        return benchmarks.EvaluationContext.create(self.mode, self.noise_seed)


@dataclass
class EvaluationBudget:
    max_fes: int
    consumed: int = 0
    context: Optional[benchmarks.EvaluationContext] = field(default=None, repr=False)

    def __post_init__(self):
        if self.max_fes < 0:
            raise ValueError(f"max_fes must be non-negative, got {self.max_fes}")

    @classmethod
    def for_dimension(cls, dimension, factor=DEFAULT_BUDGET_FACTOR):
        return cls(max_fes=int(factor) * int(dimension))

    @property
    def remaining(self):
        return self.max_fes - self.consumed

    @property
    def exhausted(self):
        return self.consumed >= self.max_fes


@dataclass(frozen=True)
class Candidate:
    point: np.ndarray
    fitness: float


@dataclass
class OptimizerResult:
    best: Candidate
    evaluations_used: int
    seed: int
    trace: Optional[List[Tuple[int, float]]] = None
    info: Dict[str, int] = field(default_factory=dict)


def make_objective(function_id, dimension, mode=Mode.RADIANS, seed=0, bounds=None):
    """Bind a function to a dimension and mode; bounds default to the catalog's"""
    desc = benchmarks.descriptor(function_id)
    dimension = int(dimension)
    if not desc.accepts(dimension):
        if desc.fixed_dimension is not None:
            raise DimensionMismatchError(
                f"{desc.id.value} is locked at dimension {desc.fixed_dimension}, got {dimension}")
        raise DimensionMismatchError(
            f"{desc.id.value} needs dimension >= {desc.min_dimension}, got {dimension}")
    lower, upper = bounds if bounds is not None else desc.bounds
    if not lower < upper:
        raise ValueError(f"lower bound {lower} must be below upper bound {upper}")
    return ObjectiveHandle(desc.id, dimension, Mode.parse(mode), float(lower), float(upper), int(seed))


def evaluate_budgeted(handle, budget, x):
    """Evaluate x through the handle and charge one evaluation to the budget"""
    if budget.exhausted:
        raise BudgetExhaustedError(f"budget of {budget.max_fes} evaluations exhausted")
    if budget.context is None:
        budget.context = handle.new_context()
    point = np.array(x, dtype=float)
    fitness = benchmarks.evaluate(handle.function, point, budget.context)
    budget.consumed += 1
    return Candidate(point, fitness)


def _out_of_bounds(x, lower, upper):
    return ~np.isfinite(x) | (x < lower) | (x > upper)


def _uniform_draws(x, lower, upper, rng, shared):
    """One uniform per out-of-bounds coordinate, or one per side when shared.

    Shared mode draws once for everything above ``upper`` (NaN included) and
    once for everything below ``lower``.
    """
    out = _out_of_bounds(x, lower, upper)
    if not out.any():
        return out, np.empty(0)
    if not shared:
        return out, lower + (upper - lower) * rng.random(int(out.sum()))
    below = x < lower
    draws = np.empty(int(out.sum()))
    for side in (out & ~below, below):
        if side.any():
            draws[side[out]] = lower + (upper - lower) * rng.random()
    return out, draws


def repair_random(x, bounds, rng=None, shared=False):
    """Replace every out-of-bounds coordinate by a uniform draw in the bounds"""
    rng = rng if rng is not None else np.random.default_rng()
    lower, upper = bounds
    x = np.array(x, dtype=float)
    out, draws = _uniform_draws(x, lower, upper, rng, shared)
    x[out] = draws
    return x


def repair_blend(x, prev, bounds, rng=None, shared=False):
    """Replace out-of-bounds coordinates by the midpoint of a uniform draw and prev"""
    rng = rng if rng is not None else np.random.default_rng()
    lower, upper = bounds
    x = np.array(x, dtype=float)
    prev = np.asarray(prev, dtype=float)
    out, draws = _uniform_draws(x, lower, upper, rng, shared)
    x[out] = (draws + prev[out]) / 2.0
    return x


class BestTracker:
    """Best-so-far candidate plus the optional (evaluation index, fitness) trace"""

    def __init__(self, record_trace=False):
        self.best = None
        self.trace = [] if record_trace else None

    def observe(self, candidate, evaluation_index):
        if self.best is None or candidate.fitness < self.best.fitness:
            self.best = candidate
            if self.trace is not None:
                self.trace.append((evaluation_index, candidate.fitness))
            return True
        return False


# ----- seeding -----

def _name_key(name):
    return zlib.crc32(str(name).encode("utf-8"))


def derive_seed(master_seed, function, algorithm, dimension, run, stream=0):
    """64-bit seed for one (function, algorithm, dimension, run) cell.

    Names are hashed with crc32 and fed to numpy's SeedSequence as the spawn
    key, so the seed depends only on the cell and not on grid order.
    """
    if master_seed < 0:
        raise ValueError(f"master seed must be non-negative, got {master_seed}")
    function = getattr(function, "value", function)
    seq = np.random.SeedSequence(
        entropy=int(master_seed),
        spawn_key=(_name_key(function), _name_key(algorithm), int(dimension), int(run), int(stream)),
    )
    return int(seq.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int

    def run_seed(self, function, algorithm, dimension, run):
        return derive_seed(self.master_seed, function, algorithm, dimension, run)

    def noise_seed(self, function, dimension, run):
        # shared by all algorithms so they face the same noise draws
        return derive_seed(self.master_seed, function, "", dimension, run, stream=1)


# ----- registry -----

_OPTIMIZERS: Dict[str, Callable] = {}


def register_optimizer(name):
    def decorator(fn):
        if name in _OPTIMIZERS and _OPTIMIZERS[name] is not fn:
            logging.warning(f"Optimizer {name!r} re-registered")
        _OPTIMIZERS[name] = fn
        return fn
    return decorator


def _load_builtin_optimizers():
    import mtsa  # noqa: F401  (registers "mtsa")


def registered_optimizers():
    _load_builtin_optimizers()
    return sorted(_OPTIMIZERS)


def get_optimizer(name):
    _load_builtin_optimizers()
    try:
        return _OPTIMIZERS[name]
    except KeyError:
        raise UnknownOptimizerError(
            f"Unknown optimizer {name!r}; registered: {', '.join(sorted(_OPTIMIZERS))}")


@register_optimizer("random_search")
def random_search(handle, budget, seed, params: Optional[Mapping] = None):
    """Uniform sampling inside the bounds until the budget is spent"""
    params = params or {}
    if budget.exhausted:
        raise BudgetExhaustedError("random_search needs at least one evaluation")
    rng = np.random.default_rng(seed)
    tracker = BestTracker(record_trace=bool(params.get("record_trace", False)))
    lower, upper = handle.bounds
    start = budget.consumed
    while not budget.exhausted:
        x = lower + (upper - lower) * rng.random(handle.dimension)
        tracker.observe(evaluate_budgeted(handle, budget, x), budget.consumed)
    logging.debug(f"random_search {handle.function.value} best={tracker.best.fitness}")
    return OptimizerResult(tracker.best, budget.consumed - start, seed, tracker.trace)
