import logging
import math
import os

import pytest

import benchmarks
import experiment
import models
from angles import Mode
from benchmarks import FunctionId
from errors import ConfigError, UnknownOptimizerError
from metrics import RunRecord
from reports import read_csv

SMALL = {
    "FUNCTIONS": "layeb01,layeb20",
    "ALGORITHMS": "mtsa,random_search",
    "DIMENSIONS": "2",
    "RUNS": "2",
    "MAX_FES": "120",
}


def _config(output_dir, **extra):
    overrides = dict(SMALL, OUTPUT_DIR=str(output_dir))
    overrides.update(extra)
    return experiment.load_config(overrides=overrides)


def test_defaults(output_dir):
    config = experiment.load_config()
    assert len(config.functions) == 20
    assert FunctionId.CROSSLEGTABLE not in config.functions
    assert config.dimensions == [10, 30]
    assert config.runs == 30
    assert config.budget_for(10) == 100_000
    assert config.mode is Mode.RADIANS
    assert config.output_directory == str(output_dir)


def test_file_values_and_flag_overrides(config_file):
    path = config_file(
        "# desk run\n"
        "FUNCTIONS=layeb12\n"
        "ALGORITHMS=mtsa\n"
        "DIMENSIONS=10\n"
        "RUNS=5\n"
        "MODE=degrees\n"
        "MTSA_POPULATION_SIZE=20\n"
    )
    config = experiment.load_config(path, {"RUNS": 3, "DIMENSIONS": None})
    assert config.functions == [FunctionId.LAYEB12]
    assert config.dimensions == [10]
    assert config.runs == 3
    assert config.mode is Mode.DEGREES
    assert config.algorithm_params == {"mtsa": {"population_size": "20"}}
    assert "MTSA_POPULATION_SIZE=20" in config.describe()


def test_unknown_keys_are_ignored_with_a_warning(config_file, caplog):
    path = config_file("RUNS=2\nCOLOUR=blue\n")
    with caplog.at_level(logging.WARNING):
        config = experiment.load_config(path)
    assert config.runs == 2
    assert "COLOUR" in caplog.text


@pytest.mark.parametrize("overrides, error", [
    ({"RUNS": "0"}, ConfigError),
    ({"RUNS": "many"}, ConfigError),
    ({"ALGORITHMS": "pso"}, UnknownOptimizerError),
    ({"FUNCTIONS": "layeb99"}, ConfigError),
    ({"MODE": "gradians"}, ConfigError),
    ({"MAX_FES": "10"}, ConfigError),
    ({"RANK_MODE": "median"}, ConfigError),
    ({"MTSA_ESCAPE_PROB": "2"}, ConfigError),
])
def test_invalid_configs(overrides, error):
    with pytest.raises(error):
        experiment.load_config(overrides=overrides)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        experiment.load_config(str(tmp_path / "nope.env"))


def test_plan_skips_unsupported_dimensions(output_dir):
    config = _config(output_dir, FUNCTIONS="crosslegtable,layeb01", DIMENSIONS="2,3")
    cells = experiment.plan_cells(config)
    assert {(c.function, c.dimension) for c in cells} == {
        (FunctionId.LAYEB01, 2), (FunctionId.LAYEB01, 3), (FunctionId.CROSSLEGTABLE, 2)}
    assert len(cells) == 3 * 2 * 2


def test_run_writes_all_result_files(output_dir):
    config = _config(output_dir)
    records = experiment.run_experiment(config)
    assert len(records) == 2 * 2 * 2
    assert all(r.evaluations_used == 120 for r in records)
    experiment.write_results(config, records)

    runs = read_csv(os.path.join(output_dir, "runs.csv"))
    assert list(runs[0]) == experiment.RUNS_HEADER
    assert len(runs) == 8
    assert len(runs[0]["best_point"].split(";")) == 2

    summary = read_csv(os.path.join(output_dir, "summary.csv"))
    assert len(summary) == 4
    assert all(float(row["min"]) <= float(row["mean"]) <= float(row["max"]) for row in summary)

    totals = read_csv(os.path.join(output_dir, "total_error.csv"))
    assert len(totals) == 4

    ranks = open(os.path.join(output_dir, "ranks_2d.csv")).read().splitlines()
    assert ranks[0] == "function,mtsa,random_search"
    assert any(line.startswith("friedman_chi2,") for line in ranks)

    assert len(models.load_records(os.path.join(output_dir, "results.db"))) == 8


def test_rerun_is_byte_identical(tmp_path, output_dir):
    outputs = []
    for name, workers in (("a", "1"), ("b", "1"), ("c", "2")):
        config = _config(tmp_path / name, WORKERS=workers)
        experiment.write_results(config, experiment.run_experiment(config))
        outputs.append(tmp_path / name)
    for filename in ("runs.csv", "summary.csv", "total_error.csv", "ranks_2d.csv"):
        contents = {(directory / filename).read_bytes() for directory in outputs}
        assert len(contents) == 1, filename


def test_rerank_in_run_mode(output_dir):
    config = _config(output_dir)
    experiment.write_results(config, experiment.run_experiment(config))
    paths = experiment.rerank(os.path.join(output_dir, "runs.csv"), str(output_dir / "reranked"), "runs")
    lines = open(paths[0]).read().splitlines()
    assert lines[1].startswith("layeb01#0,")
    assert lines[-1] == "rows,4"


def test_read_runs_round_trips_records(output_dir):
    config = _config(output_dir)
    records = experiment.run_experiment(config)
    path = experiment.write_runs(records, str(output_dir / "runs.csv"))
    assert experiment.read_runs(path) == records


def test_rank_table_needs_two_algorithms(output_dir):
    config = _config(output_dir, ALGORITHMS="mtsa", MAX_FES="60")
    records = experiment.run_experiment(config)
    assert experiment.rank_table(records, 2) is None


def test_total_error_uses_the_whole_optimum_set():
    point = (2 * math.pi, math.pi, 2 * math.pi, math.pi)
    stated = benchmarks.stated_optimum_value("layeb05", 4).value
    records = [RunRecord("layeb05", "mtsa", 4, run, stated, point, 100, run) for run in range(3)]
    rows = experiment.total_error_rows(records)
    (row,) = rows
    assert row[:3] == ["layeb05", "mtsa", 4]
    assert row[3] == pytest.approx(0.0, abs=1e-12)
    assert row[4] == pytest.approx(0.0, abs=1e-12)
