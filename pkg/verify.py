"""
Catalog Verification
====================

Checks the benchmark catalog against its own optimum claims.

- ``check_stated_optimum`` evaluates each function at its canonical optimum
  point and compares with the stated value; mismatches are recorded, never
  raised
- ``grid_oracle_2d`` brute-forces the 2-D box on a uniform grid;
  ``argmin_cells`` measures how far its argmin sits from the optimum set
- ``perturbation_check`` samples a small ball around the optimum
- ``build_report`` / ``write_report`` assemble the verification.txt and
  verification.csv files

Only functions tagged ``verified`` can fail. Inconsistent and ambiguous
functions are reported with their measured values and grid minima.
"""

import logging
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

import benchmarks
from angles import Mode, to_degrees, to_radians
from benchmarks import Consistency, EvaluationContext
from reports import format_number, write_csv

DEGREE_TOLERANCE = 1e-9
RADIAN_TOLERANCE = 1e-6
GRID_TOLERANCE = 1e-3
DEFAULT_DIMENSIONS = (2, 10, 30)
_CHUNK_POINTS = 250_000


def default_tolerance(mode):
    return DEGREE_TOLERANCE if Mode.parse(mode) is Mode.DEGREES else RADIAN_TOLERANCE


@dataclass
class VerificationEntry:
    function: benchmarks.FunctionId
    dimension: int
    mode: Mode
    consistency: Consistency
    stated_value: float
    measured_value: float
    abs_gap: float
    tolerance: float
    skipped: bool = False
    grid_min: Optional[float] = None
    grid_argmin: Optional[np.ndarray] = None
    grid_argmin_cells: Optional[float] = None

    @property
    def within_tolerance(self):
        return self.abs_gap <= self.tolerance

    @property
    def failed(self):
        return (not self.skipped and self.consistency is Consistency.VERIFIED
                and not self.within_tolerance)


@dataclass
class SurfaceGrid:
    function: benchmarks.FunctionId
    mode: Mode
    axis_x: np.ndarray
    axis_y: np.ndarray
    values: np.ndarray  # values[i, j] = f(axis_x[i], axis_y[j])

    def rows(self):
        """(x, y, f) triples, row-major over the first axis"""
        xs, ys = np.meshgrid(self.axis_x, self.axis_y, indexing="ij")
        return zip(xs.ravel(), ys.ravel(), self.values.ravel())


def check_stated_optimum(function_id, n, tolerance=None, mode=None, seed=0):
    desc = benchmarks.descriptor(function_id)
    mode = Mode.parse(mode) if mode is not None else desc.verification_mode
    tolerance = default_tolerance(mode) if tolerance is None else tolerance
    if not desc.accepts(n):
        return VerificationEntry(desc.id, n, mode, desc.consistency, float("nan"), float("nan"),
                                 float("nan"), tolerance, skipped=True)

    stated = benchmarks.stated_optimum_value(desc.id, n)
    point = benchmarks.reference_optimum_point(desc.id, n)
    measured = benchmarks.evaluate(desc.id, point, EvaluationContext.create(mode, seed))
    gap = abs(measured - stated.value) if np.isfinite(measured) else float("inf")
    return VerificationEntry(desc.id, n, mode, desc.consistency, stated.value, measured, gap, tolerance)


def surface_grid(function_id, resolution, mode=Mode.RADIANS, bounds=None, seed=0):
    """Evaluate f on a resolution x resolution grid over a 2-D box.

    In degree mode the axes (and ``bounds``) are in degrees and each point is
    converted back to radians before evaluation. Noisy functions draw from
    one seeded stream in grid-index order.
    """
    desc = benchmarks.descriptor(function_id)
    mode = Mode.parse(mode)
    if resolution < 2:
        raise ValueError(f"resolution must be at least 2, got {resolution}")
    if not desc.accepts(2):
        raise ValueError(f"{desc.id.value} is not defined in two dimensions")
    if bounds is None:
        bounds = desc.bounds
        if mode is Mode.DEGREES:
            bounds = tuple(float(b) for b in to_degrees(np.array(bounds)))
    lower, upper = bounds
    axis = np.linspace(lower, upper, resolution)

    xs, ys = np.meshgrid(axis, axis, indexing="ij")
    points = np.column_stack([xs.ravel(), ys.ravel()])
    if mode is Mode.DEGREES:
        points = to_radians(points)
    ctx = EvaluationContext.create(mode, seed)
    values = np.empty(points.shape[0])
    for start in range(0, points.shape[0], _CHUNK_POINTS):
        stop = start + _CHUNK_POINTS
        values[start:stop] = benchmarks.evaluate_batch(desc.id, points[start:stop], ctx)
    return SurfaceGrid(desc.id, mode, axis, axis.copy(), values.reshape(resolution, resolution))


def grid_oracle_2d(function_id, resolution=1001, mode=None, seed=0):
    """Minimum and argmin over a uniform grid of the function's 2-D box.

    The argmin is returned in radians whatever the mode.
    """
    desc = benchmarks.descriptor(function_id)
    mode = Mode.parse(mode) if mode is not None else desc.verification_mode
    grid = surface_grid(desc.id, resolution, mode, seed=seed)
    i, j = np.unravel_index(np.argmin(grid.values), grid.values.shape)
    argmin = np.array([grid.axis_x[i], grid.axis_y[j]])
    if mode is Mode.DEGREES:
        argmin = to_radians(argmin)
    return float(grid.values[i, j]), argmin


def grid_spacing(function_id, resolution):
    lower, upper = benchmarks.descriptor(function_id).bounds
    return (upper - lower) / (resolution - 1)


def argmin_cells(function_id, argmin, resolution):
    """Distance from a grid argmin (radians) to the nearest optimum, in grid cells"""
    distance = benchmarks.optimum_distance(function_id, argmin)
    return distance / grid_spacing(function_id, resolution)


def perturbation_check(function_id, n, epsilon=1e-3, samples=1000, seed=0, mode=None):
    """True iff no sampled point within epsilon of x* scores below f(x*) - 1e-12"""
    desc = benchmarks.descriptor(function_id)
    if desc.consistency is Consistency.INCONSISTENT:
        raise ValueError(f"{desc.id.value} has no consistent optimum to perturb")
    mode = Mode.parse(mode) if mode is not None else desc.verification_mode
    rng = np.random.default_rng(seed)
    centre = benchmarks.reference_optimum_point(desc.id, n)
    ctx = EvaluationContext.create(mode, seed)
    base = benchmarks.evaluate(desc.id, centre, ctx)

    directions = rng.normal(size=(samples, n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = epsilon * rng.random(samples)[:, np.newaxis]
    values = benchmarks.evaluate_batch(desc.id, centre + radii * directions, ctx)
    return bool(np.all(values >= base - 1e-12))


def build_report(dimensions=DEFAULT_DIMENSIONS, tolerance=None, mode=None,
                 grid_resolution=1001, seed=0, functions=None):
    entries = []
    for function_id in functions or benchmarks.list_functions():
        for n in dimensions:
            entry = check_stated_optimum(function_id, n, tolerance, mode, seed)
            if n == 2 and grid_resolution and not entry.skipped:
                entry.grid_min, entry.grid_argmin = grid_oracle_2d(
                    function_id, grid_resolution, entry.mode, seed)
                entry.grid_argmin_cells = argmin_cells(function_id, entry.grid_argmin, grid_resolution)
            _log_entry(entry)
            entries.append(entry)
    return entries


def _log_entry(entry):
    name = f"{entry.function.value} n={entry.dimension} ({entry.mode.value})"
    if entry.skipped:
        logging.debug(f"{name}: skipped, fixed dimension")
    elif entry.failed:
        logging.error(f"{name}: measured {entry.measured_value!r} vs stated {entry.stated_value!r}, "
                      f"gap {entry.abs_gap:.3e} > {entry.tolerance:.0e}")
    elif entry.consistency is not Consistency.VERIFIED and not entry.within_tolerance:
        logging.warning(f"{name} is {entry.consistency.value}: measured {entry.measured_value!r} "
                        f"vs stated {entry.stated_value!r}")
    else:
        logging.info(f"{name}: ok (gap {entry.abs_gap:.3e})")


def report_failed(entries):
    return any(e.failed for e in entries)


_CSV_HEADER = ["function", "dim", "mode", "consistency", "stated_value", "measured_value",
               "abs_gap", "passed", "grid_min", "grid_argmin_x", "grid_argmin_y", "grid_argmin_cells"]


def _csv_row(entry):
    argmin = entry.grid_argmin if entry.grid_argmin is not None else (None, None)
    passed = "skipped" if entry.skipped else entry.within_tolerance
    return [entry.function.value, entry.dimension, entry.mode.value, entry.consistency.value,
            entry.stated_value, entry.measured_value, entry.abs_gap, passed,
            entry.grid_min, argmin[0], argmin[1], entry.grid_argmin_cells]


def _text_line(entry):
    head = f"{entry.function.value:<14} n={entry.dimension:<3} {entry.mode.value:<8}"
    if entry.skipped:
        return f"{head} SKIP  fixed dimension"
    spec = benchmarks.descriptor(entry.function).stated_optimum
    status = "FAIL" if entry.failed else ("ok" if entry.within_tolerance else "FLAG")
    line = (f"{head} {status:<5} stated={format_number(entry.stated_value)} ({spec.formula_text}) "
            f"measured={format_number(entry.measured_value)} gap={entry.abs_gap:.3e} "
            f"[{entry.consistency.value}]")
    if entry.grid_min is not None:
        line += f" grid_min={format_number(entry.grid_min)}"
    if entry.grid_argmin_cells is not None:
        line += f" argmin_cells={entry.grid_argmin_cells:.2f}"
    if spec.note:
        line += f"; {spec.note}"
    return line


def write_report(entries, directory):
    """Write verification.txt and verification.csv; returns both paths"""
    os.makedirs(directory, exist_ok=True)
    csv_path = write_csv(os.path.join(directory, "verification.csv"), _CSV_HEADER,
                         (_csv_row(e) for e in entries))
    failed = [e for e in entries if e.failed]
    flagged = [e for e in entries if not e.skipped and not e.failed and not e.within_tolerance]
    txt_path = os.path.join(directory, "verification.txt")
    with open(txt_path, "w", encoding="utf-8") as handle:
        handle.write("Benchmark catalog verification\n")
        handle.write(f"entries={len(entries)} failed={len(failed)} flagged={len(flagged)}\n\n")
        for entry in entries:
            handle.write(_text_line(entry) + "\n")
    return txt_path, csv_path
