"""Analytic field generators: traveling and standing plane waves, and the
exact field of a point electric dipole with an arbitrary moment waveform.

Every generator returns a FieldSource, so the diagnostics and scanning
machinery treat them uniformly.
"""

import math
from dataclasses import dataclass
from typing import Callable

from .core import (
    EMField,
    FieldSource,
    SpaceTimePoint,
    UnitSystem,
    Vec3,
    X_HAT,
    Z_HAT,
    superpose,
)
from .errors import SingularityError

FOUR_PI = 4.0 * math.pi

_POL_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class PlaneWaveSpec:
    """Parameters of a monochromatic plane wave traveling along +z or -z.

    ``polarization`` is the unit direction of the electric field and must
    be orthogonal to the propagation axis.
    """

    amplitude: float
    omega: float
    direction: int = +1
    polarization: Vec3 = X_HAT

    def __post_init__(self):
        if self.omega <= 0.0:
            raise ValueError(f"omega must be positive, got {self.omega!r}")
        if self.direction not in (-1, +1):
            raise ValueError(f"direction must be +1 or -1, got {self.direction!r}")
        pol = self.polarization
        if abs(pol.norm() - 1.0) > _POL_UNIT_TOL:
            raise ValueError(f"polarization must be a unit vector, got norm {pol.norm()!r}")
        if abs(pol.z) > _POL_UNIT_TOL:
            raise ValueError("polarization must be orthogonal to the z axis")


def traveling_plane_wave(spec: PlaneWaveSpec, units: UnitSystem = UnitSystem()) -> FieldSource:
    """A single traveling plane wave; a null field at every sample.

    For propagation along +z the fields are

        E = pol * A cos(k z - omega t)
        B = (z_hat x pol) * A cos(k z - omega t),    k = omega / c,

    and along -z the phase is k z + omega t with B flipped so the flux
    E x B points along the propagation direction.  |E| = |B| and E.B = 0
    hold exactly, so the reactive density vanishes at every sample.
    """
    amp = spec.amplitude
    omega = spec.omega
    k = omega / units.c
    pol = spec.polarization
    if spec.direction == +1:
        b_pol = Z_HAT.cross(pol)
        sign = -1.0
    else:
        b_pol = -Z_HAT.cross(pol)
        sign = +1.0

    def evaluate(point: SpaceTimePoint) -> EMField:
        value = amp * math.cos(k * point.r.z + sign * omega * point.t)
        return EMField(pol * value, b_pol * value)

    return FieldSource(
        name=f"plane-wave({spec.direction:+d}z, A={amp:g}, omega={omega:g})",
        evaluate=evaluate,
        source_free=True,
    )


def standing_plane_wave(
    amplitude: float, omega: float, units: UnitSystem = UnitSystem()
) -> FieldSource:
    """Two counter-propagating plane waves of equal amplitude, x polarized.

    The superposition has

        U   = A^2 [cos^2(kz - wt) + cos^2(kz + wt)]
        S_z = A^2 [cos^2(kz - wt) - cos^2(kz + wt)]
        R   = 2 A^2 |cos(kz - wt) cos(kz + wt)|

    with k = omega / c.  The reactive density is carried entirely by the
    interference between the two (individually null) traveling waves.
    """
    if omega <= 0.0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    forward = traveling_plane_wave(
        PlaneWaveSpec(amplitude=amplitude, omega=omega, direction=+1), units
    )
    backward = traveling_plane_wave(
        PlaneWaveSpec(amplitude=amplitude, omega=omega, direction=-1), units
    )
    combined = superpose([forward, backward])
    return FieldSource(
        name=f"standing-wave(A={amplitude:g}, omega={omega:g})",
        evaluate=combined.evaluate,
        source_free=True,
    )


@dataclass(frozen=True)
class DipoleWaveform:
    """A dipole-moment history p(t) with its first two time derivatives.

    The three evaluators must describe the same function; the derivatives
    are supplied in closed form because the dipole field mixes p, p', and
    p'' with different radial powers, and numerically differentiated
    inputs would spoil convergence studies downstream.
    """

    p: Callable[[float], float]
    p_dot: Callable[[float], float]
    p_ddot: Callable[[float], float]
    amplitude: float = 1.0
    tau: float = 1.0
    omega0: float = 0.0
    t0: float = 0.0


def gaussian_waveform(
    amplitude: float, tau: float, omega0: float = 0.0, t0: float = 0.0
) -> DipoleWaveform:
    """A Gaussian-windowed cosine: p(t) = A exp(-((t-t0)/tau)^2) cos(omega0 (t-t0)).

    Args:
        amplitude: peak moment A (attained at t = t0).
        tau: Gaussian width, must be positive.
        omega0: carrier frequency; zero gives a plain Gaussian pulse.
        t0: center time.
    """
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    if omega0 < 0.0:
        raise ValueError(f"omega0 must be nonnegative, got {omega0!r}")
    inv_tau2 = 1.0 / (tau * tau)

    def p(t: float) -> float:
        d = t - t0
        return amplitude * math.exp(-d * d * inv_tau2) * math.cos(omega0 * d)

    def p_dot(t: float) -> float:
        d = t - t0
        gauss = math.exp(-d * d * inv_tau2)
        cos_th = math.cos(omega0 * d)
        sin_th = math.sin(omega0 * d)
        return amplitude * gauss * (-2.0 * d * inv_tau2 * cos_th - omega0 * sin_th)

    def p_ddot(t: float) -> float:
        d = t - t0
        gauss = math.exp(-d * d * inv_tau2)
        cos_th = math.cos(omega0 * d)
        sin_th = math.sin(omega0 * d)
        cos_coef = 4.0 * d * d * inv_tau2 * inv_tau2 - 2.0 * inv_tau2 - omega0 * omega0
        sin_coef = 4.0 * d * omega0 * inv_tau2
        return amplitude * gauss * (cos_coef * cos_th + sin_coef * sin_th)

    return DipoleWaveform(
        p=p, p_dot=p_dot, p_ddot=p_ddot,
        amplitude=amplitude, tau=tau, omega0=omega0, t0=t0,
    )


def electric_dipole(
    waveform: DipoleWaveform, units: UnitSystem = UnitSystem()
) -> FieldSource:
    """The exact retarded field of a point electric dipole p(t) z_hat at the origin.

    With n = r/|r| and p, p', p'' evaluated at the retarded time t - r/c:

        E = (1/4pi) [ (3 n (n.z) - z_hat) (p/r^3 + p'/(c r^2))
                      + (n (n.z) - z_hat) p''/(c^2 r) ]
        B = (1/4pi) (z_hat x n) (p'/(c r^2) + p''/(c^2 r))

    This solves the vacuum Maxwell equations for r > 0 and carries energy
    outward in the radiation zone.  Evaluation at r = 0 raises; the moment
    itself is a point source there, so the generator is not flagged
    source-free.
    """
    wf = waveform
    c = units.c
    inv_c = 1.0 / c
    inv_c2 = inv_c * inv_c

    def evaluate(point: SpaceTimePoint) -> EMField:
        x, y, z = point.r.x, point.r.y, point.r.z
        r2 = x * x + y * y + z * z
        if r2 == 0.0:
            raise SingularityError("dipole field is singular at the origin")
        r = math.sqrt(r2)
        nx, ny, nz = x / r, y / r, z / r
        t_ret = point.t - r * inv_c
        p = wf.p(t_ret)
        pd = wf.p_dot(t_ret)
        pdd = wf.p_ddot(t_ret)
        near = (p / r + pd * inv_c) / r2
        radiated = pdd * inv_c2 / r
        transverse = 3.0 * near + radiated
        ex = nx * nz * transverse / FOUR_PI
        ey = ny * nz * transverse / FOUR_PI
        ez = ((3.0 * nz * nz - 1.0) * near + (nz * nz - 1.0) * radiated) / FOUR_PI
        b_mag = (pd * inv_c / r2 + pdd * inv_c2 / r) / FOUR_PI
        return EMField(Vec3(ex, ey, ez), Vec3(-ny * b_mag, nx * b_mag, 0.0))

    return FieldSource(
        name=(
            f"electric-dipole(A={wf.amplitude:g}, tau={wf.tau:g}, "
            f"omega0={wf.omega0:g}, t0={wf.t0:g})"
        ),
        evaluate=evaluate,
        source_free=False,
    )
