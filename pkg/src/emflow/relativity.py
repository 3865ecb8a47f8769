"""Lorentz boosts of events, field samples, and whole sources.

A boost is parameterized by beta = velocity / c, so the field
transformation is free of unit choices; the event transformation takes
the unit system to convert between time and length.  Boosting a source
lets the frame-independence of the reactive density be checked directly:
sample the moving-frame source anywhere and the reactive density agrees
with the rest-frame value at the corresponding event.
"""

import math
from dataclasses import dataclass, field

from .core import EMField, FieldSource, SpaceTimePoint, UnitSystem, Vec3

# gamma diverges as |beta| -> 1; anything this close is rejected.
_BETA_LIMIT = 1.0 - 1e-12


@dataclass(frozen=True)
class Boost:
    """A pure Lorentz boost with velocity beta (in units of c), |beta| < 1."""

    beta: Vec3
    gamma: float = field(init=False)

    def __post_init__(self):
        speed2 = self.beta.norm2()
        if math.sqrt(speed2) >= _BETA_LIMIT:
            raise ValueError(
                f"boost speed must satisfy |beta| < {_BETA_LIMIT}, got {math.sqrt(speed2)!r}"
            )
        object.__setattr__(self, "gamma", 1.0 / math.sqrt(1.0 - speed2))

    def inverse(self) -> "Boost":
        return Boost(-self.beta)


def boost_event(
    p: SpaceTimePoint, b: Boost, units: UnitSystem = UnitSystem()
) -> SpaceTimePoint:
    """Transform an event into the frame moving with velocity beta * c.

    The component of r along beta contracts and mixes with t in the usual
    way; transverse components are untouched.  The parallel projection is
    folded in through the identity (gamma - 1)/beta^2 = gamma^2/(gamma + 1),
    which stays well conditioned as beta -> 0.
    """
    g = b.gamma
    beta = b.beta
    c = units.c
    beta_dot_r = beta.dot(p.r)
    coef = g * g / (g + 1.0)
    r_prime = p.r + beta * (coef * beta_dot_r) - beta * (g * c * p.t)
    t_prime = g * (p.t - beta_dot_r / c)
    return SpaceTimePoint(r_prime, t_prime)


def boost_field(f: EMField, b: Boost) -> EMField:
    """Transform a field sample into the frame moving with velocity beta * c.

    Components along beta are unchanged; transverse components mix as
    E' = gamma (E + beta x B), B' = gamma (B - beta x E).  Both
    E^2 - B^2 and E.B are preserved, hence so is the reactive density.
    """
    g = b.gamma
    beta = b.beta
    coef = g * g / (g + 1.0)
    e_prime = (f.e + beta.cross(f.b)) * g - beta * (coef * beta.dot(f.e))
    b_prime = (f.b - beta.cross(f.e)) * g - beta * (coef * beta.dot(f.b))
    return EMField(e_prime, b_prime)


def boosted_source(
    s: FieldSource, b: Boost, units: UnitSystem = UnitSystem()
) -> FieldSource:
    """View a source from a uniformly moving frame.

    The returned evaluator maps a moving-frame event back to the rest
    frame with the inverse boost, samples the original source there, and
    transforms the sample forward.  Composing with the inverse boost
    recovers the original samples up to rounding.
    """
    inverse = b.inverse()

    def evaluate(point: SpaceTimePoint) -> EMField:
        rest_event = boost_event(point, inverse, units)
        return boost_field(s.evaluate(rest_event), b)

    beta = b.beta
    return FieldSource(
        name=f"boosted({s.name}, beta=({beta.x:g},{beta.y:g},{beta.z:g}))",
        evaluate=evaluate,
        source_free=s.source_free,
    )
