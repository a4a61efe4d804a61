"""
Result Metrics
==============

Error measures, run statistics and Friedman ranking over finished runs.

- ``error``: best value minus the stated optimum
- ``mte``: mean over runs of (value gap + Euclidean distance to the optimum)
- ``bte``: the same total error for a single (best) run
- ``summarize``: mean, sample std, min and max
- ``normalize_matrix`` / ``friedman_ranks``: per-function min-max
  normalization, tie-averaged ranks and the Friedman chi-square statistic
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import stats

from benchmarks import FunctionId
from errors import DimensionMismatchError


@dataclass(frozen=True)
class RunRecord:
    function: FunctionId
    algorithm: str
    dimension: int
    run_index: int
    best_value: float
    best_point: Tuple[float, ...]
    evaluations_used: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "function", FunctionId.parse(self.function))
        object.__setattr__(self, "best_point", tuple(float(v) for v in self.best_point))
        if len(self.best_point) != self.dimension:
            raise DimensionMismatchError(
                f"best_point has {len(self.best_point)} coordinates, dimension is {self.dimension}")

    @property
    def point(self):
        return np.array(self.best_point)

    @property
    def cell(self):
        return self.function, self.algorithm, self.dimension


@dataclass(frozen=True)
class StatsSummary:
    mean: float
    std: float
    min: float
    max: float
    count: int


@dataclass
class RankTable:
    algorithms: List[str]
    functions: List[str]
    normalized_matrix: np.ndarray
    ranks: np.ndarray
    average_ranks: np.ndarray
    friedman_statistic: float
    p_value: float

    @property
    def rows(self):
        return len(self.functions)


def error(record, stated_value):
    if not np.isfinite(stated_value):
        raise ValueError(f"stated value must be finite, got {stated_value}")
    return record.best_value - stated_value


def _distance(point, global_point):
    """Distance to the optimum.

    ``global_point`` is one point, a 2-d array of alternative optima, or a
    callable returning the distance to the optimum set itself.
    """
    if callable(global_point):
        return float(global_point(point))
    optima = np.atleast_2d(np.asarray(global_point, dtype=float))
    if optima.shape[1] != point.size:
        raise DimensionMismatchError(
            f"global point has {optima.shape[1]} coordinates, record has {point.size}")
    return float(np.min(np.linalg.norm(optima - point, axis=1)))


def total_error(record, global_value, global_point):
    return (record.best_value - global_value) + _distance(record.point, global_point)


def mte(records, global_value, global_point):
    """Mean Total Error over the runs of one (function, algorithm, dimension) cell"""
    records = list(records)
    if not records:
        raise ValueError("mte needs at least one record")
    cells = {r.cell for r in records}
    if len(cells) > 1:
        raise ValueError(f"records span several cells: {sorted(map(str, cells))}")
    return float(np.mean([total_error(r, global_value, global_point) for r in records]))


def bte(record, global_value, global_point):
    return float(total_error(record, global_value, global_point))


def best_record(records):
    records = list(records)
    if not records:
        raise ValueError("no records")
    return min(records, key=lambda r: (r.best_value, r.run_index))


def summarize(values: Sequence[float]):
    values = np.asarray(list(values), dtype=float)
    if values.size == 0:
        raise ValueError("cannot summarize an empty sample")
    lo, hi = float(values.min()), float(values.max())
    with np.errstate(invalid="ignore", over="ignore"):
        mean = float(np.mean(values))
        if values.size == 1:
            std = 0.0
        elif not np.all(np.isfinite(values)):
            std = float("inf")
        else:
            std = float(np.std(values, ddof=1))
    if np.isfinite(mean):
        mean = min(max(mean, lo), hi)
    return StatsSummary(mean, std, lo, hi, int(values.size))


def summarize_records(records, stated_value):
    return summarize(error(r, stated_value) for r in records)


def _clamp_row(row):
    """Replace non-finite entries so they rank worst (+inf, NaN) or best (-inf)"""
    row = np.array(row, dtype=float)
    finite = np.isfinite(row)
    if finite.all():
        return row
    if not finite.any():
        top = np.where(row == -np.inf, -1.0, 1.0)
        return np.where(np.isnan(row), 1.0, top)
    top = row[finite].max()
    bottom = row[finite].min()
    high = 10.0 * top if top > 0 else top + 9.0 * abs(top) + 1.0
    low = 10.0 * bottom if bottom < 0 else bottom - 9.0 * abs(bottom) - 1.0
    row[np.isnan(row) | (row == np.inf)] = high
    row[row == -np.inf] = low
    return row


def normalize_matrix(raw):
    """Per-row min-max normalization into [0, 1]; constant rows become zeros"""
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 2:
        raise ValueError(f"expected a functions x algorithms matrix, got shape {raw.shape}")
    out = np.zeros_like(raw)
    for i, row in enumerate(raw):
        row = _clamp_row(row)
        span = row.max() - row.min()
        if span > 0:
            out[i] = (row - row.min()) / span
    return np.clip(out, 0.0, 1.0)


def friedman_statistic(ranks):
    n_rows, a = ranks.shape
    mean_ranks = ranks.mean(axis=0)
    return float(12.0 * n_rows / (a * (a + 1)) * (np.sum(mean_ranks ** 2) - a * (a + 1) ** 2 / 4.0))


def friedman_ranks(matrix, algorithms=None, functions=None):
    """Rank algorithms per row (1 = lowest error, ties averaged) and average them"""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {matrix.shape}")
    n_rows, a = matrix.shape
    if a < 2 or n_rows < 2:
        raise ValueError(f"need at least 2 algorithms and 2 functions, got {a} and {n_rows}")
    algorithms = list(algorithms) if algorithms is not None else [f"alg{j + 1}" for j in range(a)]
    functions = list(functions) if functions is not None else [f"f{i + 1}" for i in range(n_rows)]
    if len(algorithms) != a or len(functions) != n_rows:
        raise ValueError("label lengths do not match the matrix shape")

    clamped = np.vstack([_clamp_row(row) for row in matrix])
    ranks = stats.rankdata(clamped, method="average", axis=1)
    chi2 = friedman_statistic(ranks)
    return RankTable(
        algorithms=algorithms,
        functions=functions,
        normalized_matrix=normalize_matrix(matrix),
        ranks=ranks,
        average_ranks=ranks.mean(axis=0),
        friedman_statistic=chi2,
        p_value=float(stats.chi2.sf(chi2, a - 1)),
    )
