"""
Experiment Runner
=================

Runs every (function, algorithm, dimension, run) cell of an experiment and
writes the result files.

Key Features:
- Plain-text KEY=VALUE config files read with python-dotenv
- Per-cell seeds derived from one master seed, independent of scheduling
- Optional process pool (WORKERS); files are written by one collector
  after all cells finish, so outputs are byte-identical across reruns
- runs.csv, summary.csv, total_error.csv, ranks_<dim>d.csv and results.db

Environment Requirements:
- LAYEB_OUTPUT_DIR: default output directory (default "results")
- LAYEB_MASTER_SEED: default master seed (default 20220101)
"""

import functools
import logging
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from dotenv import dotenv_values

import benchmarks
import metrics
import models
from angles import Mode
from errors import ConfigError, UnknownFunctionError
from optimizer import EvaluationBudget, SeedSpec, get_optimizer, make_objective, registered_optimizers
from reports import format_point, parse_point, read_csv, write_csv

DEFAULT_OUTPUT_DIR = "results"
DEFAULT_MASTER_SEED = 20220101
RANK_MODES = ("mean", "runs")


def default_output_dir():
    return os.getenv("LAYEB_OUTPUT_DIR", DEFAULT_OUTPUT_DIR)


def default_master_seed():
    raw = os.getenv("LAYEB_MASTER_SEED", str(DEFAULT_MASTER_SEED))
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"LAYEB_MASTER_SEED must be an integer, got {raw!r}")


def default_functions():
    """layeb01 ... layeb20; crosslegtable only runs when named explicitly"""
    return [f for f in benchmarks.list_functions() if f is not benchmarks.FunctionId.CROSSLEGTABLE]


@dataclass
class ExperimentConfig:
    functions: List[benchmarks.FunctionId] = field(default_factory=default_functions)
    algorithms: List[str] = field(default_factory=lambda: ["mtsa"])
    dimensions: List[int] = field(default_factory=lambda: [10, 30])
    runs: int = 30
    budget_factor: int = 10_000
    max_fes: Optional[int] = None
    mode: Mode = Mode.RADIANS
    master_seed: int = DEFAULT_MASTER_SEED
    output_directory: str = DEFAULT_OUTPUT_DIR
    workers: int = 1
    rank_mode: str = "mean"
    record_trace: bool = False
    algorithm_params: Dict[str, Dict[str, str]] = field(default_factory=dict)

    def budget_for(self, dimension):
        return self.max_fes if self.max_fes is not None else self.budget_factor * dimension

    def params_for(self, algorithm):
        params = dict(self.algorithm_params.get(algorithm, {}))
        if self.record_trace:
            params["record_trace"] = True
        return params

    def validate(self):
        if self.runs < 1:
            raise ConfigError(f"RUNS must be >= 1, got {self.runs}")
        if not self.functions or not self.algorithms or not self.dimensions:
            raise ConfigError("FUNCTIONS, ALGORITHMS and DIMENSIONS must not be empty")
        if self.workers < 1:
            raise ConfigError(f"WORKERS must be >= 1, got {self.workers}")
        if self.rank_mode not in RANK_MODES:
            raise ConfigError(f"RANK_MODE must be one of {RANK_MODES}, got {self.rank_mode!r}")
        if self.master_seed < 0:
            raise ConfigError(f"MASTER_SEED must be non-negative, got {self.master_seed}")
        for algorithm in self.algorithms:
            get_optimizer(algorithm)
        for dimension in self.dimensions:
            if dimension < 2:
                raise ConfigError(f"dimensions must be >= 2, got {dimension}")
            budget = self.budget_for(dimension)
            needed = self._population_needs()
            if budget < needed:
                raise ConfigError(f"budget {budget} at {dimension}d is below the population size {needed}")
        return self

    def _population_needs(self):
        if "mtsa" not in self.algorithms:
            return 1
        from mtsa import MtsaParams
        return MtsaParams.from_mapping(self.algorithm_params.get("mtsa", {})).population_size

    def describe(self):
        """KEY=VALUE text of the resolved config, stored with the results"""
        lines = [
            f"FUNCTIONS={','.join(f.value for f in self.functions)}",
            f"ALGORITHMS={','.join(self.algorithms)}",
            f"DIMENSIONS={','.join(str(d) for d in self.dimensions)}",
            f"RUNS={self.runs}",
            f"BUDGET_FACTOR={self.budget_factor}",
            f"MAX_FES={self.max_fes if self.max_fes is not None else ''}",
            f"MODE={self.mode.value}",
            f"MASTER_SEED={self.master_seed}",
            f"RANK_MODE={self.rank_mode}",
            f"RECORD_TRACE={str(self.record_trace).lower()}",
        ]
        for algorithm, params in sorted(self.algorithm_params.items()):
            lines += [f"{algorithm.upper()}_{k.upper()}={v}" for k, v in sorted(params.items())]
        return "\n".join(lines) + "\n"


def _split(raw):
    return [part.strip() for part in str(raw).split(",") if part.strip()]


def _as_int(key, raw):
    try:
        return int(str(raw).strip())
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {raw!r}")


def _as_bool(raw):
    return str(raw).strip().lower() in ("1", "true", "yes", "on")


def _parse_functions(raw):
    names = _split(raw)
    if [n.lower() for n in names] == ["all"]:
        return default_functions()
    try:
        return [benchmarks.FunctionId.parse(n) for n in names]
    except UnknownFunctionError as e:
        raise ConfigError(str(e.args[0]))


def load_config(path=None, overrides=None):
    """Resolve a config from defaults, an optional KEY=VALUE file and overrides.

    Overrides (typically command-line flags) win over file values; keys set to
    None are ignored.
    """
    values = {}
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError(f"Config file not found: {path}")
        values.update({k.upper(): v for k, v in dotenv_values(path).items() if v is not None})
    values.update({k.upper(): v for k, v in (overrides or {}).items() if v is not None})

    config = ExperimentConfig(output_directory=default_output_dir(), master_seed=default_master_seed())
    algorithm_names = set(registered_optimizers())
    for key, raw in values.items():
        if key == "FUNCTIONS":
            config.functions = _parse_functions(raw)
        elif key == "ALGORITHMS":
            config.algorithms = _split(raw)
        elif key == "DIMENSIONS":
            config.dimensions = [_as_int(key, d) for d in _split(raw)]
        elif key in ("RUNS", "BUDGET_FACTOR", "WORKERS"):
            setattr(config, key.lower(), _as_int(key, raw))
        elif key == "MAX_FES":
            config.max_fes = _as_int(key, raw) if str(raw).strip() else None
        elif key == "MODE":
            try:
                config.mode = Mode.parse(raw)
            except ValueError as e:
                raise ConfigError(str(e))
        elif key == "MASTER_SEED":
            config.master_seed = _as_int(key, raw)
        elif key == "OUTPUT_DIR":
            config.output_directory = str(raw)
        elif key == "RANK_MODE":
            config.rank_mode = str(raw).strip().lower()
        elif key == "RECORD_TRACE":
            config.record_trace = _as_bool(raw)
        else:
            prefix = next((a for a in algorithm_names if key.startswith(a.upper() + "_")), None)
            if prefix is None:
                logging.warning(f"Ignoring unknown config key {key}")
                continue
            param = key[len(prefix) + 1:].lower()
            config.algorithm_params.setdefault(prefix, {})[param] = raw
    return config.validate()


@dataclass(frozen=True)
class Cell:
    function: benchmarks.FunctionId
    algorithm: str
    dimension: int
    run: int

    @property
    def sort_key(self):
        return (benchmarks.list_functions().index(self.function), self.algorithm, self.dimension, self.run)


def plan_cells(config):
    cells = []
    for function in config.functions:
        desc = benchmarks.descriptor(function)
        for dimension in config.dimensions:
            if not desc.accepts(dimension):
                logging.warning(f"Skipping {function.value} at {dimension}d (unsupported dimension)")
                continue
            for algorithm in config.algorithms:
                cells.extend(Cell(function, algorithm, dimension, run) for run in range(config.runs))
    return sorted(cells, key=lambda c: c.sort_key)


def run_cell(cell, config):
    seeds = SeedSpec(config.master_seed)
    handle = make_objective(cell.function, cell.dimension, config.mode,
                            seed=seeds.noise_seed(cell.function, cell.dimension, cell.run))
    budget = EvaluationBudget(config.budget_for(cell.dimension))
    seed = seeds.run_seed(cell.function, cell.algorithm, cell.dimension, cell.run)
    result = get_optimizer(cell.algorithm)(handle, budget, seed, config.params_for(cell.algorithm))
    record = metrics.RunRecord(
        function=cell.function,
        algorithm=cell.algorithm,
        dimension=cell.dimension,
        run_index=cell.run,
        best_value=result.best.fitness,
        best_point=tuple(result.best.point),
        evaluations_used=result.evaluations_used,
        seed=seed,
    )
    logging.info(f"{cell.function.value} {cell.algorithm} {cell.dimension}d run {cell.run}: "
                 f"best={record.best_value!r} fes={record.evaluations_used}")
    return record


def _run_cell_job(job):
    cell, config = job
    return run_cell(cell, config)


def run_experiment(config):
    """Execute every cell; records come back sorted by cell"""
    cells = plan_cells(config)
    logging.info(f"Running {len(cells)} cells with {config.workers} worker(s), "
                 f"master seed {config.master_seed}, mode {config.mode.value}")
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_run_cell_job, [(cell, config) for cell in cells]))
    else:
        records = [run_cell(cell, config) for cell in cells]
    order = {(c.function, c.algorithm, c.dimension, c.run): c.sort_key for c in cells}
    return sorted(records, key=lambda r: order[(r.function, r.algorithm, r.dimension, r.run_index)])


# ----- aggregation -----

def group_by_cell(records):
    groups = defaultdict(list)
    for record in records:
        groups[record.cell].append(record)
    return groups


def _cell_order(cell):
    function, algorithm, dimension = cell
    return benchmarks.list_functions().index(function), algorithm, dimension


def record_error(record):
    return metrics.error(record, benchmarks.stated_optimum_value(record.function, record.dimension).value)


def summary_rows(records):
    rows = []
    for cell, group in sorted(group_by_cell(records).items(), key=lambda kv: _cell_order(kv[0])):
        function, algorithm, dimension = cell
        stated = benchmarks.stated_optimum_value(function, dimension)
        summary = metrics.summarize_records(group, stated.value)
        rows.append([function.value, algorithm, dimension, summary.count, summary.mean, summary.std,
                     summary.min, summary.max, stated.value, stated.consistency.value])
    return rows


def total_error_rows(records):
    rows = []
    for cell, group in sorted(group_by_cell(records).items(), key=lambda kv: _cell_order(kv[0])):
        function, algorithm, dimension = cell
        value = benchmarks.stated_optimum_value(function, dimension).value
        optima = functools.partial(benchmarks.optimum_distance, function)
        rows.append([function.value, algorithm, dimension,
                     metrics.mte(group, value, optima),
                     metrics.bte(metrics.best_record(group), value, optima), value])
    return rows


def rank_table(records, dimension, rank_mode="mean"):
    """Friedman ranks of the algorithms at one dimension, or None when too few"""
    records = [r for r in records if r.dimension == dimension]
    algorithms = sorted({r.algorithm for r in records})
    functions = [f for f in benchmarks.list_functions() if any(r.function is f for r in records)]
    errors = {(r.function, r.algorithm, r.run_index): record_error(r) for r in records}

    labels, rows = [], []
    for function in functions:
        if rank_mode == "runs":
            run_ids = sorted({r.run_index for r in records if r.function is function})
            for run in run_ids:
                row = [errors.get((function, a, run)) for a in algorithms]
                if None not in row:
                    labels.append(f"{function.value}#{run}")
                    rows.append(row)
        else:
            row = []
            for algorithm in algorithms:
                values = [v for (f, a, _), v in errors.items() if f is function and a == algorithm]
                row.append(metrics.summarize(values).mean if values else None)
            if None not in row:
                labels.append(function.value)
                rows.append(row)

    if len(algorithms) < 2 or len(rows) < 2:
        logging.info(f"Skipping ranks at {dimension}d: {len(algorithms)} algorithm(s), {len(rows)} row(s)")
        return None
    return metrics.friedman_ranks(np.array(rows), algorithms, labels)


def write_rank_table(table, path):
    rows = [[label] + list(values) for label, values in zip(table.functions, table.normalized_matrix)]
    rows.append(["average_rank"] + list(table.average_ranks))
    rows.append(["friedman_chi2", table.friedman_statistic])
    rows.append(["p_value", table.p_value])
    rows.append(["rows", table.rows])
    return write_csv(path, ["function"] + table.algorithms, rows)


RUNS_HEADER = ["function", "algorithm", "dim", "run", "seed", "best_value", "error", "evals", "best_point"]


def write_runs(records, path):
    rows = ([r.function.value, r.algorithm, r.dimension, r.run_index, r.seed, r.best_value,
             record_error(r), r.evaluations_used, format_point(r.best_point)] for r in records)
    return write_csv(path, RUNS_HEADER, rows)


def read_runs(path):
    if not os.path.exists(path):
        raise ConfigError(f"runs file not found: {path}")
    records = []
    for row in read_csv(path):
        try:
            records.append(metrics.RunRecord(
                function=row["function"],
                algorithm=row["algorithm"],
                dimension=int(row["dim"]),
                run_index=int(row["run"]),
                best_value=float(row["best_value"]),
                best_point=tuple(parse_point(row["best_point"])),
                evaluations_used=int(row["evals"]),
                seed=int(row["seed"]),
            ))
        except (KeyError, ValueError) as e:
            raise ConfigError(f"malformed runs file {path}: {e}")
    return records


def write_rankings(records, directory, rank_mode="mean"):
    paths = []
    for dimension in sorted({r.dimension for r in records}):
        table = rank_table(records, dimension, rank_mode)
        if table is None:
            continue
        paths.append(write_rank_table(table, os.path.join(directory, f"ranks_{dimension}d.csv")))
        ranks = ", ".join(f"{a}={r:.3f}" for a, r in zip(table.algorithms, table.average_ranks))
        logging.info(f"{dimension}d Friedman ranks: {ranks}; chi2={table.friedman_statistic:.4f}")
    return paths


def write_results(config, records):
    directory = config.output_directory
    os.makedirs(directory, exist_ok=True)
    paths = [
        write_runs(records, os.path.join(directory, "runs.csv")),
        write_csv(os.path.join(directory, "summary.csv"),
                  ["function", "algorithm", "dim", "count", "mean", "std", "min", "max",
                   "stated_optimum", "consistency"], summary_rows(records)),
        write_csv(os.path.join(directory, "total_error.csv"),
                  ["function", "algorithm", "dim", "mte", "bte", "global_value"], total_error_rows(records)),
    ]
    paths += write_rankings(records, directory, config.rank_mode)

    errors = {(r.function, r.algorithm, r.dimension, r.run_index): record_error(r) for r in records}
    db_path = os.path.join(directory, "results.db")
    experiment_id = models.save_records(db_path, records, config.master_seed, config.mode,
                                        config.describe(), errors)
    logging.info(f"Stored experiment {experiment_id} ({len(records)} runs) in {db_path}")
    return paths


def rerank(runs_path, directory=None, rank_mode="mean"):
    """Rebuild ranks_<dim>d.csv from an existing runs.csv"""
    if rank_mode not in RANK_MODES:
        raise ConfigError(f"rank mode must be one of {RANK_MODES}, got {rank_mode!r}")
    records = read_runs(runs_path)
    directory = directory or os.path.dirname(os.path.abspath(runs_path))
    return write_rankings(records, directory, rank_mode)
