"""
Benchmark Function Suite
========================

The twenty Layeb test functions plus the crosslegtable demonstrator, as pure
n-dimensional objectives with bounds and optimum metadata.

Key Features:
- Vectorised evaluation over a batch of points (``evaluate_batch``)
- Radian and degree evaluation modes sharing one formula per function
- Seeded noise streams for the two stochastic functions
- Stated optimum values and canonical optimum points, each tagged with how
  well the printed formula reproduces the printed optimum

Parse decisions worth knowing before reading the formulas:
- Layeb09 is read as sqrt(|e^A / e^B - 1|)
- Layeb14 and Layeb16 drop the printed leading minus
- Layeb15 takes |tanh(.)| under the square root
- ``log`` is the natural logarithm everywhere
- ``rand^i`` is one fresh uniform per term raised to the 1-based term index
"""

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from angles import Mode, Trig
from errors import DimensionMismatchError, NoCanonicalPointError, UnknownFunctionError

LN_0_001 = math.log(0.001)


class FunctionId(str, enum.Enum):
    LAYEB01 = "layeb01"
    LAYEB02 = "layeb02"
    LAYEB03 = "layeb03"
    LAYEB04 = "layeb04"
    LAYEB05 = "layeb05"
    LAYEB06 = "layeb06"
    LAYEB07 = "layeb07"
    LAYEB08 = "layeb08"
    LAYEB09 = "layeb09"
    LAYEB10 = "layeb10"
    LAYEB11 = "layeb11"
    LAYEB12 = "layeb12"
    LAYEB13 = "layeb13"
    LAYEB14 = "layeb14"
    LAYEB15 = "layeb15"
    LAYEB16 = "layeb16"
    LAYEB17 = "layeb17"
    LAYEB18 = "layeb18"
    LAYEB19 = "layeb19"
    LAYEB20 = "layeb20"
    CROSSLEGTABLE = "crosslegtable"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise UnknownFunctionError(f"Unknown function: {value!r}")


class Modality(str, enum.Enum):
    UNIMODAL = "unimodal"
    MULTIMODAL = "multimodal"


class Consistency(str, enum.Enum):
    VERIFIED = "verified"
    INCONSISTENT = "inconsistent-as-printed"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class OptimumSpec:
    """Stated optimum of one function.

    ``value_formula`` maps the dimension n to the stated optimum value.
    ``point_pattern`` maps (n, k) to a canonical optimum point; ``k_range``
    lists the k values keeping that point inside the bounds.
    ``extra_patterns`` are further optimum families over the same k values.

    ``chain_values`` lists every coordinate value an optimal pair
    (x_i, x_{i+1}) can take; ``free_coordinate`` is "first" when x_1 is
    unconstrained and "any" when either coordinate of a pair may be.
    """

    value_formula: Callable[[int], float]
    formula_text: str
    point_pattern: Optional[Callable[[int, int], np.ndarray]]
    consistency: Consistency
    default_k: int = 0
    k_range: Tuple[int, ...] = (0,)
    mirrored: bool = False
    note: str = ""
    extra_patterns: Tuple[Callable[[int, int], np.ndarray], ...] = ()
    chain_values: Optional[Callable[[], np.ndarray]] = None
    free_coordinate: Optional[str] = None


@dataclass(frozen=True)
class FunctionDescriptor:
    id: FunctionId
    display_name: str
    modality: Modality
    separable: bool
    noisy: bool
    lower_bound: float
    upper_bound: float
    stated_optimum: OptimumSpec
    verification_mode: Mode = Mode.RADIANS
    min_dimension: int = 2
    fixed_dimension: Optional[int] = None
    objective: Callable = field(default=None, repr=False, compare=False)

    @property
    def bounds(self):
        return self.lower_bound, self.upper_bound

    @property
    def consistency(self):
        return self.stated_optimum.consistency

    def accepts(self, n):
        if self.fixed_dimension is not None:
            return n == self.fixed_dimension
        return n >= self.min_dimension


@dataclass(frozen=True)
class StatedOptimum:
    value: float
    consistency: Consistency

    @property
    def verified(self):
        return self.consistency is Consistency.VERIFIED


class NoiseSource:
    """Seeded stream of uniform reals in [0, 1).

    Each evaluation of a noisy function draws one uniform per summand, so a
    batch of m points consumes exactly what m single evaluations would.
    """

    def __init__(self, seed=0):
        self.seed = seed
        self._rng = np.random.default_rng(seed)

    def uniform(self, shape):
        return self._rng.random(shape)

    def reset(self):
        self._rng = np.random.default_rng(self.seed)

    def __repr__(self):
        return f"NoiseSource(seed={self.seed})"


@dataclass
class EvaluationContext:
    mode: Mode = Mode.RADIANS
    noise: NoiseSource = field(default_factory=NoiseSource)

    def __post_init__(self):
        self.mode = Mode.parse(self.mode)
        self.trig = Trig(self.mode)

    @classmethod
    def create(cls, mode=Mode.RADIANS, seed=0):
        return cls(mode=Mode.parse(mode), noise=NoiseSource(seed))


# ----- formulas: X is (m, n), result is (m,) -----

def _pairs(X):
    return X[:, :-1], X[:, 1:]


def _layeb01(X, trig, noise):
    return np.sum(100.0 ** 2 * np.sqrt(np.abs(np.exp((X - 1.0) ** 2) - 1.0)), axis=1)


def _layeb02(X, trig, noise):
    return np.sum(np.abs(np.exp(100.0 * (X - 1.0) ** 2 / np.exp(X + 1.0)) - 1.0), axis=1)


def _layeb03(X, trig, noise):
    xi, xj = _pairs(X)
    ai, aj = _pairs(trig.angle(X))
    radial = np.exp(np.abs(100.0 - np.sqrt(xi ** 2 + xj ** 2) / np.pi))
    return np.sum(np.abs(trig.sin(ai) * radial + trig.sin(aj) + 1.0) ** -0.1, axis=1)


def _layeb04(X, trig, noise):
    xi, xj = _pairs(X)
    ai, aj = _pairs(trig.angle(X))
    return np.sum(np.log(np.abs(xi * xj) + 0.001) + trig.cos(ai + aj), axis=1)


def _layeb05(X, trig, noise):
    ai, aj = _pairs(trig.angle(X))
    h = trig.half_turn
    num = np.log(np.abs(trig.sin(ai - h / 2) + trig.cos(aj - h)) + 0.001)
    den = np.abs(trig.cos(2.0 * ai - aj + h / 2)) + 1.0
    return np.sum(num / den, axis=1)


def _layeb06(X, trig, noise):
    ai, aj = _pairs(trig.angle(X))
    inner = trig.cos(np.sqrt(ai ** 2 + aj ** 2)) * trig.sin(aj) + trig.cos(aj) + 1.0
    return np.sum(np.abs(inner) ** 0.1, axis=1)


def _layeb07(X, trig, noise):
    ai, aj = _pairs(trig.angle(X))
    h = trig.half_turn
    first = 100.0 * np.abs(trig.cos(ai + aj - h / 2)) ** 0.1
    return np.sum(first - np.exp(trig.cos(16.0 * ai * aj / h)) + np.e, axis=1)


def _layeb08(X, trig, noise):
    xi, xj = _pairs(X)
    ai, aj = _pairs(trig.angle(X))
    return np.sum(np.log(np.abs(xi - xj) + 0.001) + np.abs(100.0 * trig.cos(ai - aj)), axis=1)


def _layeb09(X, trig, noise):
    xi, xj = _pairs(X)
    ai, aj = _pairs(trig.angle(X))
    b = trig.cos(ai + aj)
    a = np.abs(xj) * (np.abs(trig.sin(aj)) - 1.0) + b
    return np.sum(np.sqrt(np.abs(np.exp(a) / np.exp(b) - 1.0)), axis=1)


def _layeb10(X, trig, noise):
    xi, xj = _pairs(X)
    ai, aj = _pairs(trig.angle(X))
    return np.sum(np.log(xi ** 2 + xj ** 2 + 0.5) ** 2 + np.abs(100.0 * trig.sin(ai - aj)), axis=1)


def _layeb11(X, trig, noise):
    xi, xj = _pairs(X)
    num = trig.cos(trig.angle(xi * xj) + trig.half_turn)
    den = (100.0 * np.abs(xi ** 2 - xj - 1.0)) ** 2 + 1.0
    return np.sum(num / den, axis=1)


def _layeb12(X, trig, noise):
    # the x_i here scale a half turn, they are not angles themselves
    xi, xj = _pairs(X)
    h = trig.half_turn
    wave = trig.cos(h / 2 * xi - h / 4 * xj - h / 2) * np.exp(trig.cos(2.0 * h * xi * xj))
    return -np.sum(wave + 1.0, axis=1)


def _layeb13(X, trig, noise):
    xi, xj = _pairs(X)
    ai, aj = _pairs(trig.angle(X))
    return np.sum(np.abs(trig.cos(ai - aj)) + 100.0 * np.abs(np.log(np.abs(xi + xj) + 1.0)) ** 0.1, axis=1)


def _layeb14(X, trig, noise):
    xi, xj = _pairs(X)
    return np.sum(100.0 * np.abs(xi ** 2 - xj - 1.0) ** 0.1 + np.abs(np.log((xi + xj + 2.0) ** 2)), axis=1)


def _layeb15(X, trig, noise):
    xi, xj = _pairs(X)
    root = 10.0 * np.sqrt(np.abs(np.tanh(2.0 * np.abs(xi) - xj ** 2 - 1.0)))
    return np.sum(root + np.abs(np.exp(xi * xj + 1.0) - 1.0), axis=1)


def _layeb16(X, trig, noise):
    xi, xj = _pairs(X)
    ai, aj = _pairs(trig.angle(X))
    inner = trig.tan(aj) * xi + 100.0 * np.abs(trig.cos(ai) ** 2 - trig.sin(aj) ** 2) - np.pi / 4
    return np.sum(np.abs(inner) ** 0.2, axis=1)


def _layeb17(X, trig, noise):
    xi, xj = _pairs(X)
    well = 1.0 / ((1000.0 * (xi ** 2 - xj - 1.0)) ** 2 + 1.0)
    return np.sum(10.0 * np.abs(np.log((xi + xj + 2.0) ** 2)) - well + 1.0, axis=1)


def _layeb18(X, trig, noise):
    ai, aj = _pairs(trig.angle(X))
    num = np.log(np.abs(trig.cos(2.0 * ai * aj / trig.half_turn)) + 0.001)
    den = np.abs(trig.sin(ai + aj) * trig.cos(ai)) + 1.0
    return np.sum(num / den, axis=1)


def _term_powers(noise, shape):
    return noise.uniform(shape) ** np.arange(1, shape[1] + 1)


def _layeb19(X, trig, noise):
    weights = _term_powers(noise, X.shape)
    return np.sum(100.0 * weights * np.log((X - 1.0) ** 2 + 1.0) ** 2, axis=1)


def _layeb20(X, trig, noise):
    weights = _term_powers(noise, X.shape)
    return np.sum(weights * (X - 1.0) ** 2, axis=1)


def _crosslegtable(X, trig, noise):
    a = trig.angle(X)
    radial = np.exp(100.0 - np.sqrt(X[:, 0] ** 2 + X[:, 1] ** 2) / np.pi)
    return -1.0 / (np.abs(trig.sin(a[:, 0]) * trig.sin(a[:, 1]) * radial) + 1.0) ** 0.1


# ----- optimum patterns -----

def _constant(c):
    return lambda n, k: np.full(n, float(c))


def _alternation(first, second):
    """(first(k), second(k), first(k), ...) of length n"""
    def pattern(n, k):
        point = np.empty(n)
        point[0::2] = first(k)
        point[1::2] = second(k)
        return point
    return pattern


def _per_k(fn):
    return lambda n, k: np.full(n, fn(k))


def _zero(n):
    return 0.0


def _minus_n_plus_1(n):
    return -(n - 1.0)


def _ln_times(n):
    return LN_0_001 * (n - 1)


def _ln_minus_one_times(n):
    return (LN_0_001 - 1.0) * (n - 1)


def _e_plus_one_times(n):
    return -(math.e + 1.0) * (n - 1)


def _minus_one(n):
    return -1.0


_ONES = _constant(1.0)
_ODD_HALF_PI = _per_k(lambda k: (2 * k - 1) * np.pi / 2)
_ODD_HALF_PI_K = tuple(range(-2, 4))


# ----- coordinate values of optimal pairs (filtered to the bounds later) -----

def _odd_pi():
    return np.array([(2 * j - 1) * np.pi for j in range(-5, 6)])


def _zero_or_odd_pi():
    return np.append(_odd_pi(), 0.0)


def _thirds_of_pi():
    # cos x_{i+1} = -cos x_i and sin(2x_i - x_{i+1}) = 0
    return np.array([j * np.pi / 3 for j in range(-12, 13)])


def _zero_or_odd_half_pi():
    return np.append([(2 * j - 1) * np.pi / 2 for j in range(-6, 7)], 0.0)


def _layeb11_values():
    # x_{i+1} = x_i^2 - 1 and x_i * x_{i+1} = 2*pi*m
    values = []
    for m in range(-6, 7):
        roots = np.roots([1.0, 0.0, -1.0, -2.0 * np.pi * m])
        real = roots[np.abs(roots.imag) < 1e-9].real
        values.extend(real)
        values.extend(real ** 2 - 1.0)
    return np.array(values)


def _layeb12_values():
    # 2x_i - x_{i+1} - 2 = 8m and x_i * x_{i+1} = p, both integers
    values = []
    for m in (-1, 0, 1):
        b = 2.0 + 8.0 * m
        for p in range(-26, 27):
            disc = b * b + 8.0 * p
            if disc < 0:
                continue
            for t in ((b - math.sqrt(disc)) / 4.0, (b + math.sqrt(disc)) / 4.0):
                values += [t, 2.0 * t - b]
    return np.array(values)


def _quarter_odd_pi():
    return np.array([(2 * j + 1) * np.pi / 4 for j in range(-7, 7)])


def _layeb18_values():
    # x_i * x_{i+1} = s * pi^2 / 4 (s odd) together with cos x_i = 0 or sin(x_i + x_{i+1}) = 0
    values = []
    for j in range(-3, 4):
        half = (2 * j - 1) * np.pi / 2
        values.append(half)
        values.extend((2 * q + 1) * np.pi ** 2 / 4 / half for q in range(-41, 41))
    for p in range(-7, 8):
        for q in range(-21, 21):
            disc = p * p - (2 * q + 1)
            if disc >= 0:
                values += [np.pi * (p - math.sqrt(disc)) / 2, np.pi * (p + math.sqrt(disc)) / 2]
    return np.array(values)


def _multiples_of_pi():
    return np.array([k * np.pi for k in range(-4, 5)])


def _fixed(*values):
    return lambda: np.array(values, dtype=float)


def _spec(value_formula, formula_text, pattern, consistency=Consistency.VERIFIED, **kwargs):
    return OptimumSpec(value_formula, formula_text, pattern, consistency, **kwargs)


_DEG = Mode.DEGREES

_DESCRIPTORS = (
    FunctionDescriptor(
        FunctionId.LAYEB01, "Layeb01", Modality.UNIMODAL, True, False, -100.0, 100.0,
        _spec(_zero, "0", _ONES), objective=_layeb01),
    FunctionDescriptor(
        FunctionId.LAYEB02, "Layeb02", Modality.UNIMODAL, True, False, -10.0, 10.0,
        _spec(_zero, "0", _ONES), objective=_layeb02),
    FunctionDescriptor(
        FunctionId.LAYEB03, "Arclegtable", Modality.MULTIMODAL, False, False, -10.0, 10.0,
        _spec(_minus_n_plus_1, "-n+1", _per_k(lambda k: k * np.pi), Consistency.INCONSISTENT,
              k_range=tuple(range(-3, 4)),
              note="printed formula gives +1 per term at x_i = k*pi"),
        verification_mode=_DEG, objective=_layeb03),
    FunctionDescriptor(
        FunctionId.LAYEB04, "Crossfly", Modality.MULTIMODAL, False, False, -10.0, 10.0,
        _spec(_ln_minus_one_times, "(ln(0.001)-1)(n-1)",
              _alternation(lambda k: 0.0, lambda k: (2 * k - 1) * np.pi),
              default_k=1, k_range=(-1, 0, 1, 2),
              extra_patterns=(_alternation(lambda k: (2 * k - 1) * np.pi, lambda k: 0.0),),
              chain_values=_zero_or_odd_pi),
        verification_mode=_DEG, objective=_layeb04),
    FunctionDescriptor(
        FunctionId.LAYEB05, "Dome", Modality.MULTIMODAL, False, False, -10.0, 10.0,
        _spec(_ln_times, "ln(0.001)(n-1)",
              _alternation(lambda k: (2 * k - 1) * np.pi, lambda k: 2 * k * np.pi),
              default_k=1, k_range=(-1, 0, 1),
              extra_patterns=(_alternation(lambda k: 2 * k * np.pi, lambda k: (2 * k - 1) * np.pi),),
              chain_values=_thirds_of_pi),
        verification_mode=_DEG, objective=_layeb05),
    FunctionDescriptor(
        FunctionId.LAYEB06, "Infinity", Modality.MULTIMODAL, False, False, -10.0, 10.0,
        _spec(_zero, "0", _per_k(lambda k: (2 * k - 1) * np.pi),
              default_k=1, k_range=(-1, 0, 1, 2), chain_values=_odd_pi, free_coordinate="first",
              note="x_1 is free once x_2..x_n are odd multiples of pi"),
        verification_mode=_DEG, objective=_layeb06),
    FunctionDescriptor(
        FunctionId.LAYEB07, "Layeb07", Modality.MULTIMODAL, False, False, -10.0, 10.0,
        _spec(_zero, "0",
              _alternation(lambda k: (2 * k - 1) * np.pi / 2, lambda k: k * np.pi),
              Consistency.INCONSISTENT, default_k=1, k_range=_ODD_HALF_PI_K,
              note="first term is 100 per summand at the stated optimum"),
        verification_mode=_DEG, objective=_layeb07),
    FunctionDescriptor(
        FunctionId.LAYEB08, "Layeb08", Modality.MULTIMODAL, False, False, -10.0, 10.0,
        _spec(_ln_times, "ln(0.001)(n-1)",
              _alternation(lambda k: np.pi / 4, lambda k: -np.pi / 4),
              Consistency.INCONSISTENT,
              note="ln(pi/2 + 0.001) instead of ln(0.001) at the stated alternation"),
        verification_mode=_DEG, objective=_layeb08),
    FunctionDescriptor(
        FunctionId.LAYEB09, "Layeb09", Modality.MULTIMODAL, False, False, -10.0, 10.0,
        _spec(_zero, "0", _ODD_HALF_PI, default_k=1, k_range=_ODD_HALF_PI_K,
              chain_values=_zero_or_odd_half_pi, free_coordinate="first",
              note="x_1 is free; x_2..x_n may also be 0"),
        verification_mode=_DEG, objective=_layeb09),
    FunctionDescriptor(
        FunctionId.LAYEB10, "Layeb10", Modality.MULTIMODAL, False, False, -100.0, 100.0,
        _spec(_zero, "0", _constant(0.5), mirrored=True, chain_values=_fixed(-0.5, 0.5)), objective=_layeb10),
    FunctionDescriptor(
        FunctionId.LAYEB11, "Layeb11", Modality.MULTIMODAL, False, False, -10.0, 10.0,
        _spec(_minus_n_plus_1, "-n+1", _alternation(lambda k: -1.0, lambda k: 0.0),
              extra_patterns=(_alternation(lambda k: 0.0, lambda k: -1.0),),
              chain_values=_layeb11_values),
        objective=_layeb11),
    FunctionDescriptor(
        FunctionId.LAYEB12, "Layeb12", Modality.MULTIMODAL, False, False, -5.0, 5.0,
        _spec(_e_plus_one_times, "-(e+1)(n-1)", _constant(2.0), chain_values=_layeb12_values,
              note="lattice of optimal pairs, e.g. (1, 0), (0, -2), (-5, -4)"), objective=_layeb12),
    FunctionDescriptor(
        FunctionId.LAYEB13, "Layeb13", Modality.MULTIMODAL, False, False, -10.0, 10.0,
        _spec(_zero, "0",
              _alternation(lambda k: (2 * k + 1) * np.pi / 4, lambda k: -(2 * k + 1) * np.pi / 4),
              k_range=tuple(range(-6, 6)), chain_values=_quarter_odd_pi),
        verification_mode=_DEG, objective=_layeb13),
    FunctionDescriptor(
        FunctionId.LAYEB14, "Layeb14", Modality.MULTIMODAL, False, False, -100.0, 100.0,
        _spec(_zero, "0", _alternation(lambda k: 0.0, lambda k: -1.0), Consistency.AMBIGUOUS,
              note="implemented without the printed leading minus"),
        objective=_layeb14),
    FunctionDescriptor(
        FunctionId.LAYEB15, "Layeb15", Modality.MULTIMODAL, False, False, -100.0, 100.0,
        _spec(_zero, "0", _alternation(lambda k: 1.0, lambda k: -1.0),
              extra_patterns=(_alternation(lambda k: -1.0, lambda k: 1.0),), chain_values=_fixed(-1.0, 1.0)), objective=_layeb15),
    FunctionDescriptor(
        FunctionId.LAYEB16, "Marmor", Modality.MULTIMODAL, False, False, -10.0, 10.0,
        _spec(_zero, "0", _constant(np.pi / 4), Consistency.AMBIGUOUS, mirrored=True,
              note="implemented without the printed leading minus; tan(x_{i+1}) * x_i"),
        verification_mode=_DEG, objective=_layeb16),
    FunctionDescriptor(
        FunctionId.LAYEB17, "Wings", Modality.MULTIMODAL, False, False, -100.0, 100.0,
        _spec(_zero, "0", _alternation(lambda k: -1.0, lambda k: 0.0),
              extra_patterns=(_alternation(lambda k: 0.0, lambda k: -1.0),), chain_values=_fixed(-1.0, 0.0)),
        objective=_layeb17),
    FunctionDescriptor(
        FunctionId.LAYEB18, "Zohra", Modality.MULTIMODAL, False, False, -10.0, 10.0,
        _spec(_ln_times, "ln(0.001)(n-1)", _ODD_HALF_PI, default_k=1, k_range=_ODD_HALF_PI_K,
              chain_values=_layeb18_values),
        verification_mode=_DEG, objective=_layeb18),
    FunctionDescriptor(
        FunctionId.LAYEB19, "Noiselog", Modality.UNIMODAL, True, True, -5.0, 5.0,
        _spec(_zero, "0", _ONES), objective=_layeb19),
    FunctionDescriptor(
        FunctionId.LAYEB20, "Noisesphere", Modality.UNIMODAL, True, True, -5.0, 5.0,
        _spec(_zero, "0", _ONES), objective=_layeb20),
    FunctionDescriptor(
        FunctionId.CROSSLEGTABLE, "Crosslegtable", Modality.MULTIMODAL, False, False, -10.0, 10.0,
        _spec(_minus_one, "-1", _per_k(lambda k: k * np.pi), k_range=tuple(range(-3, 4)),
              chain_values=_multiples_of_pi, free_coordinate="any",
              note="optimal whenever either coordinate is a multiple of pi"),
        verification_mode=_DEG, fixed_dimension=2, objective=_crosslegtable),
)

_CATALOG = {d.id: d for d in _DESCRIPTORS}


def list_functions():
    """Catalog order: layeb01 ... layeb20, crosslegtable last"""
    return [d.id for d in _DESCRIPTORS]


def descriptor(function_id):
    return _CATALOG[FunctionId.parse(function_id)]


def _check_dimension(desc, n):
    if not desc.accepts(n):
        if desc.fixed_dimension is not None:
            raise DimensionMismatchError(
                f"{desc.id.value} is defined for dimension {desc.fixed_dimension} only, got {n}")
        raise DimensionMismatchError(
            f"{desc.id.value} needs at least {desc.min_dimension} variables, got {n}")


def evaluate_batch(function_id, X, ctx=None):
    """Evaluate every row of an (m, n) array; returns an (m,) array.

    Overflow yields +inf; NaN (not produced by the implemented parses) is
    mapped to +inf as well.
    """
    desc = descriptor(function_id)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionMismatchError(f"expected an (m, n) array of points, got shape {X.shape}")
    _check_dimension(desc, X.shape[1])
    ctx = ctx or EvaluationContext()
    with np.errstate(all="ignore"):
        values = desc.objective(X, ctx.trig, ctx.noise)
    return np.where(np.isnan(values), np.inf, values)


def evaluate(function_id, x, ctx=None):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatchError(f"a point must be a 1-d vector, got shape {x.shape}")
    return float(evaluate_batch(function_id, x[np.newaxis, :], ctx)[0])


def stated_optimum_value(function_id, n):
    desc = descriptor(function_id)
    _check_dimension(desc, n)
    spec = desc.stated_optimum
    return StatedOptimum(float(spec.value_formula(n)), spec.consistency)


def reference_optimum_point(function_id, n, k=None):
    """Canonical optimum point for dimension n and pattern parameter k.

    Alternations start with the first listed element. Raises
    NoCanonicalPointError when the function has no pattern.
    """
    desc = descriptor(function_id)
    _check_dimension(desc, n)
    spec = desc.stated_optimum
    if spec.point_pattern is None:
        raise NoCanonicalPointError(f"{desc.id.value} has no canonical optimum point")
    if k is None:
        k = spec.default_k
    return np.asarray(spec.point_pattern(n, int(k)), dtype=float)


def reference_optimum_points(function_id, n):
    """All canonical points over the in-bounds k values, extra families and mirrors included"""
    desc = descriptor(function_id)
    spec = desc.stated_optimum
    points = [reference_optimum_point(desc.id, n, k) for k in spec.k_range]
    points += [np.asarray(pattern(n, k), dtype=float) for pattern in spec.extra_patterns for k in spec.k_range]
    if spec.mirrored:
        points += [-p for p in points]
    lo, hi = desc.bounds
    return [p for p in points if np.all((p >= lo) & (p <= hi))]


_PAIR_TOLERANCE = 1e-9


@functools.lru_cache(maxsize=None)
def _optimal_pairs(function_id):
    """Sorted in-bounds chain values and the (m, m) table of optimal pairs.

    A pair (a, b) is optimal when the two-variable function reaches its stated
    optimum there, evaluated in the function's verification mode.
    """
    desc = descriptor(function_id)
    lo, hi = desc.bounds
    values = np.sort(desc.stated_optimum.chain_values())
    values = values[(values >= lo) & (values <= hi)]
    values = values[np.concatenate([[True], np.diff(values) > 1e-12])]

    a, b = np.meshgrid(values, values, indexing="ij")
    target = stated_optimum_value(desc.id, 2).value
    ctx = EvaluationContext.create(desc.verification_mode)
    gaps = evaluate_batch(desc.id, np.column_stack([a.ravel(), b.ravel()]), ctx) - target
    allowed = np.abs(gaps) <= _PAIR_TOLERANCE * max(1.0, abs(target))
    return values, allowed.reshape(a.shape)


def _chain_distance(point, values, allowed, free_coordinate):
    """Shortest distance to a chain c_1..c_n with every (c_i, c_{i+1}) allowed.

    Dynamic programming over the coordinates; a free coordinate is an extra
    state that matches any value at zero cost.
    """
    cost = (point[:, np.newaxis] - values[np.newaxis, :]) ** 2
    if free_coordinate is not None:
        free = values.size
        cost = np.hstack([cost, np.zeros((point.size, 1))])
        allowed = np.pad(allowed, ((0, 1), (0, 1)), constant_values=True)
        allowed[free, free] = False
        if free_coordinate == "first":
            allowed[:, free] = False
    best = cost[0]
    for row in cost[1:]:
        best = row + np.where(allowed, best[:, np.newaxis], np.inf).min(axis=0)
    return float(np.sqrt(best.min()))


def optimum_distance(function_id, point):
    """Euclidean distance from point to the nearest global optimum.

    Functions with chain values get the distance to their whole optimum set,
    continuous families included; the others use reference_optimum_points.
    """
    desc = descriptor(function_id)
    point = np.asarray(point, dtype=float)
    if point.ndim != 1:
        raise DimensionMismatchError(f"a point must be a 1-d vector, got shape {point.shape}")
    _check_dimension(desc, point.size)
    spec = desc.stated_optimum
    if spec.chain_values is not None:
        values, allowed = _optimal_pairs(desc.id)
        return _chain_distance(point, values, allowed, spec.free_coordinate)
    optima = reference_optimum_points(desc.id, point.size)
    if not optima:
        raise NoCanonicalPointError(f"{desc.id.value} has no optimum point in bounds")
    return float(np.min(np.linalg.norm(np.array(optima) - point, axis=1)))
