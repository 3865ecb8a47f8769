"""Pointwise energy diagnostics of an electromagnetic field sample.

For a sample (E, B) in rationalized dimensionless units the basic
quantities are

    U = (E^2 + B^2) / 2        energy density
    S = E x B                  flux density (energy flow is c S)

from which two derived densities follow:

    R = sqrt(U^2 - |S|^2)      reactive (non-transported) energy density
      = sqrt((E^2 - B^2)^2 / 4 + (E.B)^2)

    I = R / c^2                inertia density

The two expressions for R are algebraically identical; both are provided
because they behave differently under floating point (see
reactive_density_from_invariants) and checking their agreement is a strong
self-test.  R is built from the two frame-independent scalars E^2 - B^2
and E.B, so it takes the same value in every inertial frame, and R = 0
exactly where the sample is pure radiation (a null field).

Energy is transported at the velocity v = c S / U, which satisfies
|v| <= c, reaches |v| = c precisely where R = 0, and is undefined only
where U = 0.
"""

import math
from dataclasses import dataclass

from .core import EMField, UnitSystem, Vec3, ZERO_VEC
from .errors import ConsistencyError

# U below this absolute floor counts as zero when forming v = c S / U.
# Only an exact zero of U makes the ratio meaningless; the floor merely
# keeps the division well defined at the very bottom of the double range.
U_FLOOR = 1e-300

# Radicands below -RADICAND_GUARD * U^2 are treated as internal errors
# rather than rounding noise (noise sits near machine epsilon * U^2).
RADICAND_GUARD = 1e-9


@dataclass(frozen=True)
class InvariantPair:
    """The two frame-independent field scalars E^2 - B^2 and E.B."""

    e2_minus_b2: float
    e_dot_b: float


@dataclass(frozen=True)
class DiagnosticSample:
    """All pointwise diagnostics derived from one field sample.

    ``v`` is meaningful only when ``v_defined`` is true; at exact zeros of
    the energy density it is reported as the zero vector with the flag
    cleared.
    """

    u: float
    s: Vec3
    reactive: float
    inertia: float
    v: Vec3
    v_defined: bool

    def __post_init__(self):
        if self.u < 0.0 or self.reactive < 0.0 or self.inertia < 0.0:
            raise ValueError("energy densities must be nonnegative")


def energy_density(f: EMField) -> float:
    """U = (|E|^2 + |B|^2) / 2, always nonnegative."""
    return 0.5 * (f.e.norm2() + f.b.norm2())


def poynting(f: EMField) -> Vec3:
    """The flux density S = E x B (the energy flux is c S)."""
    return f.e.cross(f.b)


def invariants(f: EMField) -> InvariantPair:
    """Both frame-independent scalars of the sample."""
    return InvariantPair(f.e.norm2() - f.b.norm2(), f.e.dot(f.b))


def _guarded_radicand(u: float, s_squared: float) -> float:
    """U^2 - |S|^2 clamped at zero, with a guard against true violations."""
    radicand = u * u - s_squared
    if radicand < -RADICAND_GUARD * u * u:
        raise ConsistencyError(
            f"U^2 - |S|^2 = {radicand!r} is far below zero (U = {u!r}); "
            "inputs do not describe a physical field sample"
        )
    return max(0.0, radicand)


def reactive_density(f: EMField) -> float:
    """R = sqrt(U^2 - |S|^2), evaluated literally from U and S.

    The radicand is clamped to zero when rounding pushes it slightly
    negative.  Near null samples this form loses accuracy (the
    cancellation error of U^2 - |S|^2 is amplified by the square root);
    reactive_density_from_invariants is exact to rounding there.

    Raises:
        ConsistencyError: if the radicand is negative far beyond rounding
            noise, which no genuine (E, B) pair can produce.
    """
    u = energy_density(f)
    s_squared = poynting(f).norm2()
    return math.sqrt(_guarded_radicand(u, s_squared))


def reactive_density_from_invariants(f: EMField) -> float:
    """R = sqrt((E^2 - B^2)^2 / 4 + (E.B)^2).

    Algebraically identical to reactive_density but numerically benign:
    the result is linear, not quadratic, in the two invariants near zero,
    so it resolves R accurately even where U^2 and |S|^2 nearly cancel.
    """
    pair = invariants(f)
    i1 = pair.e2_minus_b2
    i2 = pair.e_dot_b
    return math.sqrt(0.25 * i1 * i1 + i2 * i2)


def is_null(f: EMField, tol: float = 1e-12) -> bool:
    """Whether the sample is pure radiation: E^2 - B^2 = 0 and E.B = 0.

    Both invariants are compared against ``tol`` scaled by E^2 + B^2, so
    the test is insensitive to the overall field amplitude.  The zero
    field counts as null.
    """
    if tol < 0.0:
        raise ValueError(f"tol must be nonnegative, got {tol!r}")
    pair = invariants(f)
    scale = tol * (f.e.norm2() + f.b.norm2())
    return abs(pair.e2_minus_b2) <= scale and abs(pair.e_dot_b) <= scale


def inertia_density(f: EMField, units: UnitSystem = UnitSystem()) -> float:
    """I = R / c^2, the local impedance to radiating the energy away."""
    return reactive_density_from_invariants(f) / (units.c * units.c)


def flow_velocity(f: EMField, units: UnitSystem = UnitSystem()) -> tuple[Vec3, bool]:
    """The energy transport velocity v = c S / U.

    Returns:
        (v, True) when U exceeds the zero floor, with |v| <= c up to
        rounding; ((0,0,0), False) where U vanishes and no velocity is
        defined.
    """
    u = energy_density(f)
    if u <= U_FLOOR:
        return ZERO_VEC, False
    return poynting(f) * (units.c / u), True


def diagnose(f: EMField, units: UnitSystem = UnitSystem()) -> DiagnosticSample:
    """Bundle every pointwise diagnostic for one field sample.

    The reactive density is evaluated from the field invariants, which
    stays exact to rounding near null samples; the literal
    sqrt(U^2 - |S|^2) form is still consulted for its consistency guard,
    and the two agree to better than 1e-10 relative on generic samples.
    """
    u = energy_density(f)
    s = poynting(f)
    _guarded_radicand(u, s.norm2())
    reactive = reactive_density_from_invariants(f)
    inertia = reactive / (units.c * units.c)
    if u > U_FLOOR:
        v, v_defined = s * (units.c / u), True
    else:
        v, v_defined = ZERO_VEC, False
    return DiagnosticSample(
        u=u, s=s, reactive=reactive, inertia=inertia, v=v, v_defined=v_defined
    )
