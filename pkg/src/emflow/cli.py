"""Command-line front end.

Subcommands configure an analytic source, run a scan or analysis, and emit
CSV or JSON for plotting and regression.  Exit codes: 0 success, 1
computation error, 2 usage or validation error.  Identical invocations
produce byte-identical output files.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .analysis import (
    GridScan,
    NodeSet,
    ResidualReport,
    ScanLine,
    find_nodes,
    linspace,
    poynting_residual,
    scan,
)
from .core import FieldSource, SpaceTimePoint, UnitSystem, Vec3, Z_HAT
from .diagnostics import flow_velocity, reactive_density_from_invariants
from .errors import EmflowError
from .sources import (
    PlaneWaveSpec,
    electric_dipole,
    gaussian_waveform,
    standing_plane_wave,
    traveling_plane_wave,
)

CSV_HEADER = "t,x,y,z,Ex,Ey,Ez,Bx,By,Bz,U,Sx,Sy,Sz,R,I,vx,vy,vz,v_defined"

_SUBCOMMANDS = ("standing-wave", "plane-wave", "dipole", "nodes", "residual", "verify")


@dataclass(frozen=True)
class RunConfig:
    """A fully validated run: everything needed to compute and emit."""

    command: str
    units: UnitSystem
    out: Path | None
    fmt: str
    digits: int
    payload: dict[str, Any]


# ---------------------------------------------------------------- parsing


def _parse_range(text: str) -> list[float]:
    """Inclusive axis syntax ``start:stop:count``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected start:stop:count, got {text!r}"
        )
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if count < 2:
        raise argparse.ArgumentTypeError(f"count must be at least 2, got {count}")
    if not hi > lo:
        raise argparse.ArgumentTypeError(f"need stop > start, got {text!r}")
    return linspace(lo, hi, count)


def _parse_time_spec(text: str) -> list[float]:
    """Either a single time or a range ``start:stop:count``."""
    if ":" in text:
        return _parse_range(text)
    try:
        return [float(text)]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_span(text: str) -> tuple[float, ...]:
    """Either a single value or an interval ``lo:hi`` (for node searches)."""
    parts = text.split(":")
    try:
        values = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if len(values) == 1:
        return values
    if len(values) == 2:
        if not values[1] > values[0]:
            raise argparse.ArgumentTypeError(f"need hi > lo, got {text!r}")
        return values
    raise argparse.ArgumentTypeError(f"expected value or lo:hi, got {text!r}")


def _parse_vec2(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected px,py, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_vec3(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), float(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_vec4(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected t,x,y,z, got {text!r}")
    try:
        return tuple(float(p) for p in parts)  # type: ignore[return-value]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emflow",
        description="Energy-flow diagnostics of analytic vacuum electromagnetic fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--c", type=float, default=1.0, help="speed of light (default 1)")
    common.add_argument("--out", type=Path, default=None, help="output file path")
    common.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="output format"
    )
    common.add_argument(
        "--digits", type=int, default=9, help="significant digits in output (default 9)"
    )
    common.add_argument(
        "--config",
        type=Path,
        default=None,
        help="file of key = value defaults; explicit flags override it",
    )

    sw = sub.add_parser(
        "standing-wave", parents=[common], help="scan a standing plane wave"
    )
    sw.add_argument("--amplitude", type=float, default=1.0)
    sw.add_argument("--omega", type=float, default=1.0)
    sw.add_argument("--z", type=_parse_range, required=True, metavar="LO:HI:COUNT")
    sw.add_argument("--t", type=_parse_time_spec, required=True, metavar="T|LO:HI:COUNT")

    pw = sub.add_parser(
        "plane-wave", parents=[common], help="scan a single traveling plane wave"
    )
    pw.add_argument("--amplitude", type=float, default=1.0)
    pw.add_argument("--omega", type=float, default=1.0)
    pw.add_argument("--direction", type=int, choices=(-1, 1), default=1)
    pw.add_argument(
        "--polarization", type=_parse_vec2, default=(1.0, 0.0), metavar="PX,PY"
    )
    pw.add_argument("--z", type=_parse_range, required=True, metavar="LO:HI:COUNT")
    pw.add_argument("--t", type=_parse_time_spec, required=True, metavar="T|LO:HI:COUNT")

    dp = sub.add_parser(
        "dipole", parents=[common], help="scan a pulsed electric dipole along a ray"
    )
    dp.add_argument("--amplitude", type=float, default=1.0)
    dp.add_argument("--tau", type=float, default=1.0)
    dp.add_argument("--omega0", type=float, default=0.0)
    dp.add_argument("--t0", type=float, default=0.0)
    dp.add_argument(
        "--direction", type=_parse_vec3, default=(1.0, 0.0, 0.0), metavar="X,Y,Z"
    )
    dp.add_argument("--r", type=_parse_range, required=True, metavar="LO:HI:COUNT")
    dp.add_argument("--t", type=_parse_time_spec, required=True, metavar="T|LO:HI:COUNT")

    nd = sub.add_parser(
        "nodes",
        parents=[common],
        help="find zeros of the reactive density or the speed |v| of a standing wave",
    )
    nd.add_argument("--target", choices=("R", "v"), default="R")
    nd.add_argument("--amplitude", type=float, default=1.0)
    nd.add_argument("--omega", type=float, default=1.0)
    nd.add_argument(
        "--z", type=_parse_span, required=True, metavar="Z|LO:HI",
        help="fixed z, or the z interval to search",
    )
    nd.add_argument(
        "--t", type=_parse_span, required=True, metavar="T|LO:HI",
        help="fixed t, or the t interval to search",
    )
    nd.add_argument("--tol", type=float, default=1e-8, help="node acceptance threshold")
    nd.add_argument("--grid", type=int, default=512, help="initial bracketing grid")

    rs = sub.add_parser(
        "residual", parents=[common], help="energy-balance residual at chosen events"
    )
    rs.add_argument("--src", choices=("standing-wave", "dipole"), default="standing-wave")
    rs.add_argument("--amplitude", type=float, default=1.0)
    rs.add_argument("--omega", type=float, default=1.0)
    rs.add_argument("--tau", type=float, default=1.0)
    rs.add_argument("--omega0", type=float, default=0.0)
    rs.add_argument("--t0", type=float, default=0.0)
    rs.add_argument(
        "--point",
        type=_parse_vec4,
        action="append",
        required=True,
        metavar="T,X,Y,Z",
        help="event to probe; repeatable",
    )
    rs.add_argument("--ht", type=float, default=None, help="time step (default scaled)")
    rs.add_argument("--hx", type=float, default=None, help="space step (default scaled)")

    sub.add_parser("verify", help="run the built-in property suite")

    return parser


# ------------------------------------------------------------- validation


def _positive(name: str, value: float) -> float:
    if not value > 0.0:
        raise ValueError(f"{name} must be positive (got {value!r})")
    return value


def _common_config(args: argparse.Namespace, command: str, payload: dict) -> RunConfig:
    digits = int(args.digits)
    if not 1 <= digits <= 17:
        raise ValueError(f"digits must be between 1 and 17 (got {digits})")
    units = UnitSystem(c=args.c)
    return RunConfig(
        command=command,
        units=units,
        out=args.out,
        fmt=args.format,
        digits=digits,
        payload=payload,
    )


def _normalized_direction(raw: tuple[float, float, float]) -> Vec3:
    v = Vec3(*raw)
    n = v.norm()
    if n == 0.0:
        raise ValueError("direction must be nonzero")
    return v * (1.0 / n)


def _build_standing_wave(args) -> RunConfig:
    units = UnitSystem(c=args.c)
    source = standing_plane_wave(args.amplitude, _positive("omega", args.omega), units)
    z_values = args.z
    line = ScanLine(
        Vec3(0.0, 0.0, z_values[0]),
        Z_HAT,
        z_values[-1] - z_values[0],
        len(z_values),
    )
    return _common_config(
        args, "standing-wave", {"source": source, "line": line, "times": args.t}
    )


def _build_plane_wave(args) -> RunConfig:
    units = UnitSystem(c=args.c)
    px, py = args.polarization
    spec = PlaneWaveSpec(
        amplitude=args.amplitude,
        omega=_positive("omega", args.omega),
        direction=args.direction,
        polarization=Vec3(px, py, 0.0),
    )
    source = traveling_plane_wave(spec, units)
    z_values = args.z
    line = ScanLine(
        Vec3(0.0, 0.0, z_values[0]),
        Z_HAT,
        z_values[-1] - z_values[0],
        len(z_values),
    )
    return _common_config(
        args, "plane-wave", {"source": source, "line": line, "times": args.t}
    )


def _build_dipole(args) -> RunConfig:
    units = UnitSystem(c=args.c)
    waveform = gaussian_waveform(
        args.amplitude, _positive("tau", args.tau), args.omega0, args.t0
    )
    source = electric_dipole(waveform, units)
    r_values = args.r
    direction = _normalized_direction(args.direction)
    line = ScanLine(
        direction * r_values[0],
        direction,
        r_values[-1] - r_values[0],
        len(r_values),
    )
    return _common_config(
        args, "dipole", {"source": source, "line": line, "times": args.t}
    )


def _build_nodes(args) -> RunConfig:
    units = UnitSystem(c=args.c)
    source = standing_plane_wave(args.amplitude, _positive("omega", args.omega), units)
    z_spec, t_spec = args.z, args.t
    z_is_interval = len(z_spec) == 2
    t_is_interval = len(t_spec) == 2
    if z_is_interval == t_is_interval:
        raise ValueError(
            "exactly one of --z and --t must be an interval lo:hi (the scan axis)"
        )
    _positive("tol", args.tol)
    if args.grid < 8:
        raise ValueError(f"grid must be at least 8 (got {args.grid})")
    payload = {
        "source": source,
        "target": args.target,
        "z": z_spec,
        "t": t_spec,
        "tol": args.tol,
        "grid": args.grid,
    }
    return _common_config(args, "nodes", payload)


def _build_residual(args) -> RunConfig:
    units = UnitSystem(c=args.c)
    if args.src == "standing-wave":
        source = standing_plane_wave(args.amplitude, _positive("omega", args.omega), units)
        char_omega = args.omega
    else:
        waveform = gaussian_waveform(
            args.amplitude, _positive("tau", args.tau), args.omega0, args.t0
        )
        source = electric_dipole(waveform, units)
        char_omega = args.omega0 if args.omega0 > 0.0 else 1.0 / args.tau
    # default step 1e-3 * min(1/omega, 1/k), the shorter of the two scales
    h_default = 1e-3 * min(1.0, units.c) / char_omega
    h_t = args.ht if args.ht is not None else h_default
    h_x = args.hx if args.hx is not None else h_default
    _positive("ht", h_t)
    _positive("hx", h_x)
    points = [SpaceTimePoint(Vec3(x, y, z), t) for t, x, y, z in args.point]
    payload = {"source": source, "points": points, "h_t": h_t, "h_x": h_x}
    return _common_config(args, "residual", payload)


# --------------------------------------------------------------- emission


def _fmt(value: float, digits: int) -> str:
    if value == 0.0:
        value = 0.0  # fold -0.0 into 0
    return f"{value:.{digits}g}"


def _rounded(value: float, digits: int) -> float:
    return float(_fmt(value, digits))


def _scan_to_csv(result: GridScan, digits: int) -> str:
    lines = [CSV_HEADER]
    for rec in result.records:
        p, f, d = rec.point, rec.field, rec.sample
        cells = [
            p.t, p.r.x, p.r.y, p.r.z,
            f.e.x, f.e.y, f.e.z, f.b.x, f.b.y, f.b.z,
            d.u, d.s.x, d.s.y, d.s.z, d.reactive, d.inertia,
            d.v.x, d.v.y, d.v.z,
        ]
        lines.append(
            ",".join(_fmt(v, digits) for v in cells)
            + f",{1 if d.v_defined else 0}"
        )
    return "\n".join(lines) + "\n"


def _scan_to_json(result: GridScan, digits: int, units: UnitSystem) -> str:
    def fv(value: float) -> float:
        return _rounded(value, digits)

    def vec(v: Vec3) -> list[float]:
        return [fv(v.x), fv(v.y), fv(v.z)]

    doc = {
        "source": result.source,
        "c": units.c,
        "digits": digits,
        "times": [fv(t) for t in result.times],
        "positions": [vec(p) for p in result.positions],
        "records": [
            {
                "t": fv(rec.point.t),
                "r": vec(rec.point.r),
                "e": vec(rec.field.e),
                "b": vec(rec.field.b),
                "u": fv(rec.sample.u),
                "s": vec(rec.sample.s),
                "reactive": fv(rec.sample.reactive),
                "inertia": fv(rec.sample.inertia),
                "v": vec(rec.sample.v),
                "v_defined": rec.sample.v_defined,
            }
            for rec in result.records
        ],
    }
    return json.dumps(doc, indent=1) + "\n"


def _nodes_to_csv(nodes: NodeSet, digits: int) -> str:
    lines = ["position,residual"]
    for node in nodes.nodes:
        lines.append(f"{_fmt(node.position, digits)},{_fmt(node.residual, digits)}")
    return "\n".join(lines) + "\n"


def _nodes_to_json(nodes: NodeSet, digits: int) -> str:
    doc = {
        "abs_tol": nodes.abs_tol,
        "refine_width": nodes.refine_width,
        "nodes": [
            {
                "position": _rounded(node.position, digits),
                "residual": _rounded(node.residual, digits),
            }
            for node in nodes.nodes
        ],
    }
    return json.dumps(doc, indent=1) + "\n"


def _residuals_to_csv(reports: list[ResidualReport], digits: int) -> str:
    lines = ["t,x,y,z,h_t,h_x,residual,residual_half,ratio"]
    for rep in reports:
        p = rep.point
        cells = [p.t, p.r.x, p.r.y, p.r.z, rep.h_t, rep.h_x, rep.value, rep.value_half, rep.ratio]
        lines.append(",".join(_fmt(v, digits) for v in cells))
    return "\n".join(lines) + "\n"


def _residuals_to_json(reports: list[ResidualReport], digits: int) -> str:
    doc = [
        {
            "t": _rounded(rep.point.t, digits),
            "r": [
                _rounded(rep.point.r.x, digits),
                _rounded(rep.point.r.y, digits),
                _rounded(rep.point.r.z, digits),
            ],
            "h_t": rep.h_t,
            "h_x": rep.h_x,
            "residual": _rounded(rep.value, digits),
            "residual_half": _rounded(rep.value_half, digits),
            "ratio": _rounded(rep.ratio, digits) if math.isfinite(rep.ratio) else None,
        }
        for rep in reports
    ]
    return json.dumps(doc, indent=1) + "\n"


def _emit(text: str, out: Path | None) -> None:
    """Write the finished document, or print it when no path was given.

    The document is built in full before the file is opened, so a failed
    run leaves no file behind; if the write itself dies partway, the file
    is marked with a trailing ``# INCOMPLETE`` sentinel.
    """
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    except BaseException:
        try:
            with open(out, "a", encoding="utf-8") as handle:
                handle.write("\n# INCOMPLETE\n")
        except OSError:
            pass
        raise


# --------------------------------------------------------------- handlers


def _run_scan_command(config: RunConfig) -> int:
    payload = config.payload
    result = scan(payload["source"], payload["line"], payload["times"], config.units)
    if config.fmt == "csv":
        text = _scan_to_csv(result, config.digits)
    else:
        text = _scan_to_json(result, config.digits, config.units)
    _emit(text, config.out)
    return 0


def _run_nodes(config: RunConfig) -> int:
    payload = config.payload
    source: FieldSource = payload["source"]
    target = payload["target"]
    z_spec, t_spec = payload["z"], payload["t"]

    def value_at(z: float, t: float) -> float:
        f = source.evaluate(SpaceTimePoint(Vec3(0.0, 0.0, z), t))
        if target == "R":
            return reactive_density_from_invariants(f)
        v, defined = flow_velocity(f, config.units)
        return v.norm() if defined else 0.0

    if len(z_spec) == 2:
        lo, hi = z_spec
        fixed_t = t_spec[0]
        profile = lambda z: value_at(z, fixed_t)
    else:
        lo, hi = t_spec
        fixed_z = z_spec[0]
        profile = lambda t: value_at(fixed_z, t)

    nodes = find_nodes(profile, lo, hi, abs_tol=payload["tol"], initial_grid=payload["grid"])
    if config.out is None and config.fmt == "csv":
        for node in nodes.nodes:
            sys.stdout.write(
                f"{_fmt(node.position, config.digits)} {_fmt(node.residual, config.digits)}\n"
            )
        return 0
    text = (
        _nodes_to_csv(nodes, config.digits)
        if config.fmt == "csv"
        else _nodes_to_json(nodes, config.digits)
    )
    _emit(text, config.out)
    return 0


def _run_residual(config: RunConfig) -> int:
    payload = config.payload
    reports = [
        poynting_residual(payload["source"], point, payload["h_t"], payload["h_x"], config.units)
        for point in payload["points"]
    ]
    text = (
        _residuals_to_csv(reports, config.digits)
        if config.fmt == "csv"
        else _residuals_to_json(reports, config.digits)
    )
    _emit(text, config.out)
    return 0


def _run_verify() -> int:
    from .selfcheck import run_all

    results = run_all()
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        sys.stdout.write(f"{status} {result.name}: {result.detail}\n")
    failed = sum(1 for r in results if not r.passed)
    sys.stdout.write(
        f"{len(results) - failed}/{len(results)} properties passed\n"
    )
    return 0 if failed == 0 else 1


_BUILDERS = {
    "standing-wave": _build_standing_wave,
    "plane-wave": _build_plane_wave,
    "dipole": _build_dipole,
    "nodes": _build_nodes,
    "residual": _build_residual,
}

_RUNNERS = {
    "standing-wave": _run_scan_command,
    "plane-wave": _run_scan_command,
    "dipole": _run_scan_command,
    "nodes": _run_nodes,
    "residual": _run_residual,
}


# ------------------------------------------------------------------ entry


def _load_config_args(path: Path) -> list[str]:
    """Turn a ``key = value`` file into a flat flag list."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    flags: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ValueError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        if key == "config":
            raise ValueError(f"{path}:{lineno}: config files cannot nest")
        flags.extend([f"--{key}", value])
    return flags


def _inject_config(argv: list[str]) -> list[str]:
    """Splice config-file defaults in front of the explicit flags."""
    if not argv or argv[0] not in _SUBCOMMANDS:
        return argv
    rest = argv[1:]
    for i, token in enumerate(rest):
        if token == "--config":
            if i + 1 >= len(rest):
                return argv  # argparse will report the missing value
            return [argv[0]] + _load_config_args(Path(rest[i + 1])) + rest
        if token.startswith("--config="):
            return [argv[0]] + _load_config_args(Path(token.split("=", 1)[1])) + rest
    return argv


def main(argv: Sequence[str] | None = None) -> int:
    raw = list(argv) if argv is not None else sys.argv[1:]
    try:
        raw = _inject_config(raw)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser = build_parser()
    try:
        args = parser.parse_args(raw)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    if args.command == "verify":
        return _run_verify()
    try:
        config = _BUILDERS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _RUNNERS[config.command](config)
    except EmflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())
