import math

import numpy as np
import pytest
from scipy import stats

from errors import DimensionMismatchError
from metrics import (
    RunRecord,
    best_record,
    bte,
    error,
    friedman_ranks,
    mte,
    normalize_matrix,
    summarize,
    summarize_records,
)


def _record(value, point, run=0, function="layeb01", algorithm="mtsa"):
    return RunRecord(function, algorithm, len(point), run, value, tuple(point), 100, 1)


def test_record_checks_point_length():
    with pytest.raises(DimensionMismatchError):
        RunRecord("layeb01", "mtsa", 3, 0, 0.0, (1.0, 1.0), 10, 1)


def test_error():
    assert error(_record(1.0, [1, 1]), 0.0) == 1.0
    assert error(_record(-107.8301, [2, 2]), -107.8301) == 0.0
    with pytest.raises(ValueError):
        error(_record(1.0, [1, 1]), float("inf"))


def test_total_errors_at_the_optimum_are_zero():
    records = [_record(0.0, [1.0, 1.0], run=r) for r in range(5)]
    assert mte(records, 0.0, [1.0, 1.0]) == 0.0
    assert bte(best_record(records), 0.0, [1.0, 1.0]) == 0.0


def test_total_error_adds_gap_and_distance():
    record = _record(0.5, [3.0, 4.0])
    assert bte(record, 0.0, [0.0, 0.0]) == pytest.approx(5.5, abs=1e-15)
    assert mte([_record(0.5, [1.2, 0.0])], 0.0, [0.0, 0.0]) == pytest.approx(1.7, abs=1e-15)


def test_mte_uses_nearest_of_alternative_optima():
    record = _record(0.0, [-0.5, -0.5])
    optima = np.array([[0.5, 0.5], [-0.5, -0.5]])
    assert mte([record], 0.0, optima) == 0.0


def test_mte_rejects_mixed_cells_and_bad_points():
    with pytest.raises(ValueError):
        mte([_record(0.0, [1, 1], 0), _record(0.0, [1, 1], 1, algorithm="random_search")], 0.0, [1, 1])
    with pytest.raises(DimensionMismatchError):
        mte([_record(0.0, [1, 1])], 0.0, [1, 1, 1])
    with pytest.raises(ValueError):
        mte([], 0.0, [1, 1])


def test_best_record_picks_lowest_value():
    records = [_record(v, [1, 1], run=i) for i, v in enumerate([3.0, 1.0, 2.0, 1.0])]
    assert best_record(records).run_index == 1


def test_summarize():
    s = summarize([1.0, 1.0, 1.0])
    assert (s.mean, s.std, s.min, s.max, s.count) == (1.0, 0.0, 1.0, 1.0, 3)
    s = summarize([0.0, 2.0])
    assert s.mean == 1.0
    assert s.std == pytest.approx(math.sqrt(2))
    assert summarize([0.1] * 3).mean <= 0.1
    assert summarize([4.0]).std == 0.0
    with pytest.raises(ValueError):
        summarize([])


def test_summarize_with_overflow():
    s = summarize([1.0, float("inf")])
    assert s.max == float("inf")
    assert s.std == float("inf")


def test_summarize_records_uses_errors():
    records = [_record(v, [1, 1], run=i) for i, v in enumerate([-1.0, 0.0, 1.0])]
    s = summarize_records(records, -1.0)
    assert (s.min, s.mean, s.max, s.count) == (0.0, 1.0, 2.0, 3)


def test_normalize_rows():
    out = normalize_matrix([[0, 5, 10], [3, 3, 3], [2, 1, float("inf")]])
    np.testing.assert_array_equal(out[0], [0, 0.5, 1])
    np.testing.assert_array_equal(out[1], [0, 0, 0])
    assert out[2][2] == 1.0
    assert out[2][1] == 0.0
    assert np.all((out >= 0) & (out <= 1))


def test_ranks_are_invariant_under_monotone_row_rescaling(rng):
    raw = rng.random((6, 4))
    a = friedman_ranks(raw)
    b = friedman_ranks(np.exp(raw * 3) * 100 + 7)
    np.testing.assert_array_equal(a.ranks, b.ranks)


def test_friedman_average_ranks():
    table = friedman_ranks([[1, 2], [1, 2]], ["a", "b"], ["f1", "f2"])
    np.testing.assert_array_equal(table.average_ranks, [1.0, 2.0])
    assert table.algorithms == ["a", "b"]


def test_friedman_ties_share_ranks():
    table = friedman_ranks([[5, 5], [1, 2]])
    np.testing.assert_array_equal(table.ranks[0], [1.5, 1.5])


def test_friedman_hand_computed_fixture():
    matrix = [[1, 2, 3], [2, 1, 3], [1, 3, 2], [1, 2, 3]]
    table = friedman_ranks(matrix)
    np.testing.assert_array_equal(table.ranks.sum(axis=1), [6, 6, 6, 6])
    np.testing.assert_allclose(table.average_ranks, [1.25, 2.0, 2.75])
    assert table.friedman_statistic == pytest.approx(4.5, abs=1e-12)
    assert table.average_ranks.sum() == pytest.approx(6.0)
    assert table.p_value == pytest.approx(stats.chi2.sf(4.5, 2))


def test_friedman_statistic_matches_scipy_without_ties(rng):
    raw = rng.random((8, 4))
    table = friedman_ranks(raw)
    expected = stats.friedmanchisquare(*raw.T).statistic
    assert table.friedman_statistic == pytest.approx(expected, rel=1e-12)


def test_friedman_shape_errors():
    with pytest.raises(ValueError):
        friedman_ranks([[1, 2]])
    with pytest.raises(ValueError):
        friedman_ranks([[1], [2]])
    with pytest.raises(ValueError):
        friedman_ranks([1, 2, 3])


def test_total_error_accepts_a_distance_function():
    record = _record(0.25, [3.0, 4.0])
    assert bte(record, 0.0, lambda p: float(np.abs(p).sum())) == 7.25
    assert mte([record], 0.0, lambda p: 0.0) == 0.25
