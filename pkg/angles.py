"""
Angle Units
===========

Trigonometric primitives for the two evaluation modes.

Radian mode calls numpy's sin/cos/tan directly. Degree mode works on angles
expressed in degrees and returns exact values at multiples of 45 degrees, so
that sin(180) is a true 0 instead of the 1.2246e-16 binary64 gives for
sin(pi). Benchmark formulas are written once against a ``Trig`` adapter and
run unchanged in either mode.
"""

import enum

import numpy as np

RAD_TO_DEG = 180.0 / np.pi
DEG_TO_RAD = np.pi / 180.0

# relative distance (in ulps of the argument) within which an angle is
# treated as an exact multiple of 45 degrees
_SNAP = 64 * np.finfo(float).eps
_HALF_SQRT2 = np.sqrt(0.5)


class Mode(str, enum.Enum):
    RADIANS = "radians"
    DEGREES = "degrees"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"Unknown evaluation mode: {value!r} (expected radians or degrees)")


def to_degrees(x):
    """xd_i = x_i / pi * 180, element-wise; shape is preserved"""
    return np.asarray(x, dtype=float) * RAD_TO_DEG


def to_radians(xd):
    return np.asarray(xd, dtype=float) * DEG_TO_RAD


def _snap(xd):
    eighths = np.round(xd / 45.0)
    near = np.abs(xd - 45.0 * eighths) <= _SNAP * np.maximum(np.abs(xd), 1.0)
    return np.where(near, 45.0 * eighths, xd)


def sincosd(xd):
    """Sine and cosine of angles given in degrees.

    The argument is reduced to [-45, 45] around the nearest quarter turn and
    the quadrant is applied by swapping and negating, so multiples of 90
    degrees give exact 0 and +-1.
    """
    xd = _snap(np.asarray(xd, dtype=float))
    r = np.fmod(xd, 360.0)
    q = np.round(r / 90.0)
    r = r - 90.0 * q
    rad = r * DEG_TO_RAD
    s = np.sin(rad)
    c = np.cos(rad)
    at45 = np.abs(r) == 45.0
    s = np.where(at45, np.copysign(_HALF_SQRT2, r), s)
    c = np.where(at45, _HALF_SQRT2, c)

    # non-finite arguments leave quadrant NaN and fall through to NaN
    quadrant = np.remainder(q, 4)
    turns = [quadrant == 0, quadrant == 1, quadrant == 2]
    sin = np.select(turns, [s, c, -s], -c)
    cos = np.select(turns, [c, -s, -c], s)
    # +0.0 turns -0.0 into 0.0
    return sin + 0.0, cos + 0.0


def sind(xd):
    return sincosd(xd)[0]


def cosd(xd):
    return sincosd(xd)[1]


def tand(xd):
    s, c = sincosd(xd)
    with np.errstate(divide="ignore", invalid="ignore"):
        return s / c


class Trig:
    """Unit adapter handed to every benchmark formula.

    ``angle`` converts decision variables (always given in radians) into the
    mode's unit; ``half_turn`` is pi or 180. Formulas build their trig
    arguments from these two and call ``sin``/``cos``/``tan``.
    """

    def __init__(self, mode=Mode.RADIANS):
        self.mode = Mode.parse(mode)
        if self.mode is Mode.DEGREES:
            self.half_turn = 180.0
            self.sin, self.cos, self.tan = sind, cosd, tand
        else:
            self.half_turn = np.pi
            self.sin, self.cos, self.tan = np.sin, np.cos, np.tan

    def angle(self, x):
        """Express a radian-valued quantity in this mode's unit"""
        if self.mode is Mode.DEGREES:
            return to_degrees(x)
        return np.asarray(x, dtype=float)

    def __repr__(self):
        return f"Trig({self.mode.value})"


def sin_at_pi():
    """sin(pi) in binary64; about 1.2246467991473532e-16 instead of 0"""
    return float(np.sin(np.pi))


def power_residual(value, exponent=0.1):
    """How a tiny residual grows under a small power, e.g. 1.22e-16**0.1 = 0.0256"""
    return float(np.abs(value) ** exponent)
