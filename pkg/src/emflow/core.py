"""Geometric primitives, field samples, and the field-source contract.

All quantities are dimensionless in the rationalized (Heaviside-Lorentz)
convention, with the speed of light kept as an explicit parameter so that
formulas such as k = omega/c and v = c S/U stay readable in either the
c = 1 or the explicit-c convention.
"""

import math
from dataclasses import dataclass
from typing import Callable, Sequence


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Vec3:
    """A real 3-vector with finite components."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        object.__setattr__(self, "x", _require_finite("x", self.x))
        object.__setattr__(self, "y", _require_finite("y", self.y))
        object.__setattr__(self, "z", _require_finite("z", self.z))

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm2(self) -> float:
        return self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def __mul__(self, scalar: float) -> "Vec3":
        return Vec3(self.x * scalar, self.y * scalar, self.z * scalar)

    __rmul__ = __mul__


ZERO_VEC = Vec3(0.0, 0.0, 0.0)
X_HAT = Vec3(1.0, 0.0, 0.0)
Y_HAT = Vec3(0.0, 1.0, 0.0)
Z_HAT = Vec3(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class SpaceTimePoint:
    """A position paired with a time."""

    r: Vec3
    t: float

    def __post_init__(self):
        object.__setattr__(self, "t", _require_finite("t", self.t))


@dataclass(frozen=True)
class EMField:
    """One sample of the electric and magnetic field vectors.

    Samples add componentwise, mirroring the linearity of the vacuum
    Maxwell equations.
    """

    e: Vec3
    b: Vec3

    def __add__(self, other: "EMField") -> "EMField":
        return EMField(self.e + other.e, self.b + other.b)

    def __neg__(self) -> "EMField":
        return EMField(-self.e, -self.b)

    def __mul__(self, scalar: float) -> "EMField":
        return EMField(self.e * scalar, self.b * scalar)

    __rmul__ = __mul__


ZERO_FIELD = EMField(ZERO_VEC, ZERO_VEC)


@dataclass(frozen=True)
class UnitSystem:
    """Unit convention carrying the speed of light as an explicit scale."""

    c: float = 1.0

    def __post_init__(self):
        c = _require_finite("c", self.c)
        if c <= 0.0:
            raise ValueError(f"c must be positive, got {c!r}")
        object.__setattr__(self, "c", c)


DEFAULT_UNITS = UnitSystem()


@dataclass(frozen=True)
class FieldSource:
    """An analytic field evaluator plus descriptive metadata.

    The evaluator must be pure: the same point always yields an identical
    sample, with no side effects.  ``source_free`` declares that the field
    solves the vacuum Maxwell equations with no charges or currents
    anywhere (a point source excluded from the domain still counts as a
    source).
    """

    name: str
    evaluate: Callable[[SpaceTimePoint], EMField]
    source_free: bool = True

    def __call__(self, point: SpaceTimePoint) -> EMField:
        return self.evaluate(point)


def superpose(sources: Sequence[FieldSource]) -> FieldSource:
    """Combine sources into one whose samples are the componentwise sums.

    Args:
        sources: nonempty sequence of constituent sources.

    Returns:
        A FieldSource summing the constituents in the given order; its
        source_free flag is the conjunction of the constituents' flags.

    Raises:
        ValueError: if ``sources`` is empty.
    """
    parts = tuple(sources)
    if not parts:
        raise ValueError("superpose requires at least one source")

    def evaluate(point: SpaceTimePoint) -> EMField:
        total = parts[0].evaluate(point)
        for part in parts[1:]:
            total = total + part.evaluate(point)
        return total

    return FieldSource(
        name=" + ".join(p.name for p in parts),
        evaluate=evaluate,
        source_free=all(p.source_free for p in parts),
    )
