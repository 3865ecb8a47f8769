"""emflow: energy-flow diagnostics for analytic vacuum electromagnetic fields.

The package evaluates closed-form field sources (traveling and standing
plane waves, pulsed point dipoles) and derives, at any space-time point,
the energy density U, the flux density S = E x B, the reactive energy
density R = sqrt(U^2 - |S|^2) with its inertia density R/c^2, and the
transport velocity v = c S / U.  R is the frame-independent, locally
non-radiated part of the field energy, the field analog of a particle's
rest energy; v plays the role of the particle velocity and reaches c
exactly where R vanishes.  Analysis helpers locate the zero sets of these
densities, verify the local energy balance by finite differences, measure
far-zone decay, and average the flow over a period.
"""

from .analysis import (
    DEFAULT_SAMPLE_BUDGET,
    GridRecord,
    GridScan,
    Node,
    NodeSet,
    ResidualReport,
    ScanLine,
    ScanPlane,
    cross_invariants,
    decay_exponent,
    find_nodes,
    linspace,
    poynting_residual,
    scan,
    time_averaged_flow_velocity,
    undefined_velocity_events,
)
from .core import (
    DEFAULT_UNITS,
    EMField,
    FieldSource,
    SpaceTimePoint,
    UnitSystem,
    Vec3,
    X_HAT,
    Y_HAT,
    Z_HAT,
    ZERO_FIELD,
    ZERO_VEC,
    superpose,
)
from .diagnostics import (
    DiagnosticSample,
    InvariantPair,
    diagnose,
    energy_density,
    flow_velocity,
    inertia_density,
    invariants,
    is_null,
    poynting,
    reactive_density,
    reactive_density_from_invariants,
)
from .errors import (
    ConsistencyError,
    EmflowError,
    SampleBudgetError,
    SingularityError,
    UnderflowError,
)
from .relativity import Boost, boost_event, boost_field, boosted_source
from .sources import (
    DipoleWaveform,
    PlaneWaveSpec,
    electric_dipole,
    gaussian_waveform,
    standing_plane_wave,
    traveling_plane_wave,
)

__version__ = "0.1.0"

__all__ = [
    "Boost",
    "ConsistencyError",
    "DEFAULT_SAMPLE_BUDGET",
    "DEFAULT_UNITS",
    "DiagnosticSample",
    "DipoleWaveform",
    "EMField",
    "EmflowError",
    "FieldSource",
    "GridRecord",
    "GridScan",
    "InvariantPair",
    "Node",
    "NodeSet",
    "PlaneWaveSpec",
    "ResidualReport",
    "SampleBudgetError",
    "ScanLine",
    "ScanPlane",
    "SingularityError",
    "SpaceTimePoint",
    "UnderflowError",
    "UnitSystem",
    "Vec3",
    "X_HAT",
    "Y_HAT",
    "Z_HAT",
    "ZERO_FIELD",
    "ZERO_VEC",
    "boost_event",
    "boost_field",
    "boosted_source",
    "cross_invariants",
    "decay_exponent",
    "diagnose",
    "electric_dipole",
    "energy_density",
    "find_nodes",
    "flow_velocity",
    "gaussian_waveform",
    "inertia_density",
    "invariants",
    "is_null",
    "linspace",
    "poynting",
    "poynting_residual",
    "reactive_density",
    "reactive_density_from_invariants",
    "scan",
    "standing_plane_wave",
    "superpose",
    "time_averaged_flow_velocity",
    "traveling_plane_wave",
    "undefined_velocity_events",
]
