"""Sampling, nodal-structure extraction, conservation residuals, and
interference decomposition for analytic field sources.

Scans evaluate the full diagnostic bundle on a line or rectangle over a
set of times, in a deterministic row-major order (time outermost).  Node
finding works on nonnegative 1-D profiles, which touch zero rather than
cross it, so minima are bracketed on a uniform grid and refined by
golden-section search.
"""

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .core import EMField, FieldSource, SpaceTimePoint, UnitSystem, Vec3
from .diagnostics import (
    DiagnosticSample,
    InvariantPair,
    diagnose,
    energy_density,
    poynting,
    reactive_density_from_invariants,
)
from .errors import SampleBudgetError, SingularityError, UnderflowError

_UNIT_TOL = 1e-14

# Records are small objects; this cap keeps a worst-case scan in the
# hundreds of megabytes.
DEFAULT_SAMPLE_BUDGET = 1_000_000

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def linspace(lo: float, hi: float, count: int) -> list[float]:
    """``count`` evenly spaced values from lo to hi, endpoints included."""
    if count < 2:
        raise ValueError(f"count must be at least 2, got {count!r}")
    step = (hi - lo) / (count - 1)
    values = [lo + i * step for i in range(count)]
    values[-1] = hi
    return values


@dataclass(frozen=True)
class ScanLine:
    """A uniformly sampled segment: origin + s * direction, s in [0, length]."""

    origin: Vec3
    direction: Vec3
    length: float
    samples: int

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError(f"samples must be at least 2, got {self.samples!r}")
        if self.length <= 0.0:
            raise ValueError(f"length must be positive, got {self.length!r}")
        if abs(self.direction.norm() - 1.0) > _UNIT_TOL:
            raise ValueError("direction must be a unit vector")

    def coords(self) -> list[float]:
        return linspace(0.0, self.length, self.samples)

    def points(self) -> list[Vec3]:
        return [self.origin + self.direction * s for s in self.coords()]


@dataclass(frozen=True)
class ScanPlane:
    """A uniformly sampled rectangle spanned by two orthogonal unit axes.

    Points are ordered row-major with axis1 outermost.
    """

    origin: Vec3
    axis1: Vec3
    axis2: Vec3
    length1: float
    length2: float
    samples1: int
    samples2: int

    def __post_init__(self):
        if self.samples1 < 2 or self.samples2 < 2:
            raise ValueError("each axis needs at least 2 samples")
        if self.length1 <= 0.0 or self.length2 <= 0.0:
            raise ValueError("lengths must be positive")
        if abs(self.axis1.norm() - 1.0) > _UNIT_TOL or abs(self.axis2.norm() - 1.0) > _UNIT_TOL:
            raise ValueError("axes must be unit vectors")
        if abs(self.axis1.dot(self.axis2)) > 1e-12:
            raise ValueError("axes must be orthogonal")

    def points(self) -> list[Vec3]:
        coords1 = linspace(0.0, self.length1, self.samples1)
        coords2 = linspace(0.0, self.length2, self.samples2)
        return [
            self.origin + self.axis1 * s1 + self.axis2 * s2
            for s1 in coords1
            for s2 in coords2
        ]


@dataclass(frozen=True)
class GridRecord:
    """One scan sample: the event, the raw field, and its diagnostics."""

    point: SpaceTimePoint
    field: EMField
    sample: DiagnosticSample


@dataclass(frozen=True)
class GridScan:
    """All records of a scan, time outermost then spatial order."""

    source: str
    times: tuple[float, ...]
    positions: tuple[Vec3, ...]
    records: tuple[GridRecord, ...]

    def __post_init__(self):
        expected = len(self.times) * len(self.positions)
        if len(self.records) != expected:
            raise ValueError(
                f"record count {len(self.records)} does not match "
                f"{len(self.times)} times x {len(self.positions)} positions"
            )


def scan(
    source: FieldSource,
    geometry: ScanLine | ScanPlane,
    times: Sequence[float],
    units: UnitSystem = UnitSystem(),
    max_samples: int = DEFAULT_SAMPLE_BUDGET,
) -> GridScan:
    """Evaluate the full diagnostic bundle over geometry x times.

    Args:
        source: field to sample.
        geometry: ScanLine or ScanPlane supplying the spatial points.
        times: sample times; the outermost loop, preserved in order.
        units: unit system for the diagnostics.
        max_samples: budget on len(times) * number of positions.

    Raises:
        SampleBudgetError: if the request exceeds ``max_samples``.
        SingularityError: if any sample hits a source singularity; the
            message names the offending event.
    """
    time_list = tuple(float(t) for t in times)
    if not time_list:
        raise ValueError("times must be nonempty")
    positions = tuple(geometry.points())
    total = len(time_list) * len(positions)
    if total > max_samples:
        raise SampleBudgetError(
            f"scan of {total} samples exceeds the budget of {max_samples}"
        )
    records = []
    for t in time_list:
        for pos in positions:
            point = SpaceTimePoint(pos, t)
            try:
                field = source.evaluate(point)
            except SingularityError as exc:
                raise SingularityError(
                    f"singular sample at t={t!r}, r=({pos.x!r}, {pos.y!r}, {pos.z!r}): {exc}"
                ) from exc
            records.append(GridRecord(point, field, diagnose(field, units)))
    return GridScan(
        source=source.name,
        times=time_list,
        positions=positions,
        records=tuple(records),
    )


@dataclass(frozen=True)
class Node:
    """A refined zero of a nonnegative profile: position and leftover value."""

    position: float
    residual: float


@dataclass(frozen=True)
class NodeSet:
    """Accepted nodes along a scan, sorted by position.

    ``refine_width`` is the bracket width to which each minimum was
    narrowed before acceptance.
    """

    nodes: tuple[Node, ...]
    abs_tol: float
    refine_width: float

    def __post_init__(self):
        for a, a_next in zip(self.nodes, self.nodes[1:]):
            if not a.position < a_next.position:
                raise ValueError("node positions must be strictly increasing")
        for node in self.nodes:
            if node.residual > self.abs_tol:
                raise ValueError("node residual exceeds the acceptance threshold")

    def positions(self) -> list[float]:
        return [n.position for n in self.nodes]


def _golden_minimize(
    f: Callable[[float], float], a: float, b: float, xtol: float
) -> tuple[float, float]:
    """Narrow a bracket around a local minimum to width <= xtol."""
    h = b - a
    if h <= xtol:
        x = 0.5 * (a + b)
        return x, f(x)
    steps = int(math.ceil(math.log(xtol / h) / math.log(_INV_PHI)))
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    fc = f(c)
    fd = f(d)
    for _ in range(steps - 1):
        if fc < fd:
            b, d, fd = d, c, fc
            h *= _INV_PHI
            c = a + _INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h *= _INV_PHI
            d = a + _INV_PHI * h
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def find_nodes(
    profile: Callable[[float], float],
    lo: float,
    hi: float,
    abs_tol: float,
    initial_grid: int = 512,
) -> NodeSet:
    """Locate the zeros of a nonnegative profile on [lo, hi].

    A nonnegative profile touches zero without changing sign, so zeros are
    found as local minima: sampled on a uniform grid of ``initial_grid``
    points (endpoints included), each bracket is refined by golden-section
    search to a width of (hi - lo) / 1e9, and the refined minimum is
    accepted as a node when its value is at most ``abs_tol``.  Accepted
    minima closer than twice the grid spacing are merged to the
    lower-valued one, which suppresses duplicate brackets around flat
    troughs.  Zeros separated by less than the grid spacing cannot be
    resolved apart.

    Returns:
        NodeSet sorted by position; empty when the profile never dips to
        the threshold.
    """
    if initial_grid < 8:
        raise ValueError(f"initial_grid must be at least 8, got {initial_grid!r}")
    if abs_tol <= 0.0:
        raise ValueError(f"abs_tol must be positive, got {abs_tol!r}")
    if not hi > lo:
        raise ValueError(f"need hi > lo, got [{lo!r}, {hi!r}]")
    xs = linspace(lo, hi, initial_grid)
    fs = [profile(x) for x in xs]
    xtol = (hi - lo) / 1e9
    candidates = []
    if fs[0] <= fs[1]:
        candidates.append(_golden_minimize(profile, xs[0], xs[1], xtol))
    for i in range(1, initial_grid - 1):
        if fs[i] <= fs[i - 1] and fs[i] <= fs[i + 1]:
            candidates.append(_golden_minimize(profile, xs[i - 1], xs[i + 1], xtol))
    if fs[-1] <= fs[-2]:
        candidates.append(_golden_minimize(profile, xs[-2], xs[-1], xtol))

    accepted = sorted((x, v) for x, v in candidates if v <= abs_tol)
    spacing = (hi - lo) / (initial_grid - 1)
    merged: list[tuple[float, float]] = []
    for x, v in accepted:
        if merged and x - merged[-1][0] < 2.0 * spacing:
            if v < merged[-1][1]:
                merged[-1] = (x, v)
        else:
            merged.append((x, v))
    return NodeSet(
        nodes=tuple(Node(position=x, residual=v) for x, v in merged),
        abs_tol=abs_tol,
        refine_width=xtol,
    )


def undefined_velocity_events(
    omega: float,
    z_window: tuple[float, float],
    t_window: tuple[float, float],
    units: UnitSystem = UnitSystem(),
) -> list[tuple[float, float]]:
    """Events where the standing wave's transport velocity is undefined.

    For a standing wave of frequency omega both U and S vanish exactly on
    the lattice z = n pi/(2k), t = m pi/(2 omega) with m + n odd; these
    are the crossings of the traveling reactive-density nodes with the
    stationary velocity nodes.  Returns the lattice points inside the
    inclusive windows, sorted by (z, t).
    """
    if omega <= 0.0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    k = omega / units.c
    z_step = math.pi / (2.0 * k)
    t_step = math.pi / (2.0 * omega)
    z_lo, z_hi = z_window
    t_lo, t_hi = t_window
    # Tiny slack keeps window endpoints that land on the lattice inside.
    z_slack = 1e-9 * z_step
    t_slack = 1e-9 * t_step
    n_lo = math.ceil((z_lo - z_slack) / z_step)
    n_hi = math.floor((z_hi + z_slack) / z_step)
    m_lo = math.ceil((t_lo - t_slack) / t_step)
    m_hi = math.floor((t_hi + t_slack) / t_step)
    events = []
    for n in range(n_lo, n_hi + 1):
        for m in range(m_lo, m_hi + 1):
            if (m + n) % 2 == 1:
                events.append((n * z_step, m * t_step))
    events.sort()
    return events


@dataclass(frozen=True)
class ResidualReport:
    """Finite-difference energy-balance residual at one event.

    ``value`` estimates dU/dt + c div S with central differences at steps
    (h_t, h_x); ``value_half`` repeats it at (h_t/2, h_x/2).  On an exact
    source-free solution both converge to zero at second order, so
    ``ratio`` = |value| / |value_half| approaches 4 once the steps are in
    the asymptotic regime.
    """

    point: SpaceTimePoint
    h_t: float
    h_x: float
    value: float
    value_half: float
    ratio: float


def poynting_residual(
    source: FieldSource,
    p: SpaceTimePoint,
    h_t: float,
    h_x: float,
    units: UnitSystem = UnitSystem(),
) -> ResidualReport:
    """Check the local energy balance dU/dt + c div S = 0 at an event.

    The stencil spans p +/- h along time and each spatial axis (8 field
    evaluations per step size) and must avoid source singularities.

    Raises:
        SingularityError: propagated when the stencil hits a singular point.
    """
    if h_t <= 0.0 or h_x <= 0.0:
        raise ValueError("step sizes must be positive")
    c = units.c
    r = p.r

    def u_at(point: SpaceTimePoint) -> float:
        return energy_density(source.evaluate(point))

    def s_at(point: SpaceTimePoint) -> Vec3:
        return poynting(source.evaluate(point))

    def residual(ht: float, hx: float) -> float:
        du_dt = (
            u_at(SpaceTimePoint(r, p.t + ht)) - u_at(SpaceTimePoint(r, p.t - ht))
        ) / (2.0 * ht)
        div_s = (
            (
                s_at(SpaceTimePoint(Vec3(r.x + hx, r.y, r.z), p.t)).x
                - s_at(SpaceTimePoint(Vec3(r.x - hx, r.y, r.z), p.t)).x
            )
            + (
                s_at(SpaceTimePoint(Vec3(r.x, r.y + hx, r.z), p.t)).y
                - s_at(SpaceTimePoint(Vec3(r.x, r.y - hx, r.z), p.t)).y
            )
            + (
                s_at(SpaceTimePoint(Vec3(r.x, r.y, r.z + hx), p.t)).z
                - s_at(SpaceTimePoint(Vec3(r.x, r.y, r.z - hx), p.t)).z
            )
        ) / (2.0 * hx)
        return du_dt + c * div_s

    value = residual(h_t, h_x)
    value_half = residual(0.5 * h_t, 0.5 * h_x)
    ratio = abs(value) / abs(value_half) if value_half != 0.0 else math.inf
    return ResidualReport(
        point=p, h_t=h_t, h_x=h_x, value=value, value_half=value_half, ratio=ratio
    )


def cross_invariants(f1: EMField, f2: EMField) -> InvariantPair:
    """The interference contribution to the invariants of a summed field.

    The invariants are bilinear, so for any two samples

        invariants(f1 + f2) = invariants(f1) + invariants(f2)
                              + cross_invariants(f1, f2)

    with cross terms (2 (E1.E2 - B1.B2), E1.B2 + E2.B1).  When both inputs
    are null the cross terms alone make up the sum's invariants, which is
    how a standing wave's reactive energy arises purely from interference.
    """
    return InvariantPair(
        2.0 * (f1.e.dot(f2.e) - f1.b.dot(f2.b)),
        f1.e.dot(f2.b) + f2.e.dot(f1.b),
    )


def _fit_slope(xs: list[float], ys: list[float]) -> float:
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    num = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    den = sum((x - mean_x) ** 2 for x in xs)
    return num / den


def decay_exponent(
    source: FieldSource,
    direction: Vec3,
    radii: Sequence[float],
    time_at: Callable[[float], float],
    units: UnitSystem = UnitSystem(),
) -> tuple[float, float]:
    """Power-law decay of U and of the reactive density along a ray.

    Samples the source at radius * direction for each radius, at the time
    ``time_at(radius)`` (for pulsed sources pass the retarded peak,
    t0 + r/c, so each radius is sampled while the pulse is there), and
    fits least-squares slopes of log U and log R against log r.

    Returns:
        (slope_U, slope_R).  slope_R is NaN when any sampled reactive
        density is exactly zero (a null source has no decay law for R).

    Raises:
        UnderflowError: when a sampled U falls below 1e-280; retry with
            smaller radii.
        ValueError: for fewer than 4 radii or a non-increasing list.
    """
    radius_list = [float(r) for r in radii]
    if len(radius_list) < 4:
        raise ValueError("need at least 4 radii for a slope fit")
    if any(b <= a for a, b in zip(radius_list, radius_list[1:])):
        raise ValueError("radii must be strictly increasing")
    if radius_list[0] <= 0.0:
        raise ValueError("radii must be positive")
    if abs(direction.norm() - 1.0) > _UNIT_TOL:
        raise ValueError("direction must be a unit vector")
    log_r, log_u, log_rd = [], [], []
    reactive_positive = True
    for radius in radius_list:
        point = SpaceTimePoint(direction * radius, time_at(radius))
        sample = source.evaluate(point)
        u = energy_density(sample)
        if u < 1e-280:
            raise UnderflowError(
                f"U = {u!r} at radius {radius!r} is too small to fit; use smaller radii"
            )
        rd = reactive_density_from_invariants(sample)
        log_r.append(math.log(radius))
        log_u.append(math.log(u))
        if rd > 0.0:
            log_rd.append(math.log(rd))
        else:
            reactive_positive = False
    slope_u = _fit_slope(log_r, log_u)
    slope_r = _fit_slope(log_r, log_rd) if reactive_positive else math.nan
    return slope_u, slope_r


def time_averaged_flow_velocity(
    source: FieldSource,
    r: Vec3,
    omega: float,
    units: UnitSystem = UnitSystem(),
    quadrature_points: int = 64,
) -> tuple[Vec3, bool]:
    """The transport velocity of the period-averaged flow, c <S> / <U>.

    The averages run over one period 2 pi / omega of a source the caller
    asserts is periodic, using the trapezoid rule with the endpoint
    identified (equivalent to a plain mean over equally spaced samples,
    and spectrally accurate for smooth periodic integrands).  Averaging
    first and dividing after is not the same as averaging the
    instantaneous velocity: a standing wave has zero averaged flow at
    every position even though the instantaneous speed touches c each
    period.

    Returns:
        (v, True) normally; ((0,0,0), False) when the averaged energy
        density vanishes.
    """
    if omega <= 0.0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    if quadrature_points < 16:
        raise ValueError(
            f"quadrature_points must be at least 16, got {quadrature_points!r}"
        )
    period = 2.0 * math.pi / omega
    n = quadrature_points
    sum_u = 0.0
    sum_s = Vec3(0.0, 0.0, 0.0)
    for j in range(n):
        sample = source.evaluate(SpaceTimePoint(r, j * period / n))
        sum_u += energy_density(sample)
        sum_s = sum_s + poynting(sample)
    mean_u = sum_u / n
    if mean_u <= 0.0:
        return Vec3(0.0, 0.0, 0.0), False
    return sum_s * (units.c / sum_u), True
