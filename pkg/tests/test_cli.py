import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from emflow import (
    ScanLine,
    SpaceTimePoint,
    UnitSystem,
    Vec3,
    Z_HAT,
    linspace,
    scan,
    standing_plane_wave,
)
from emflow.cli import CSV_HEADER, main

UNITS = UnitSystem()


def _run(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ----------------------------------------------------------- scan command


def test_standing_wave_csv_schema_and_values(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code, _, _ = _run(
        [
            "standing-wave", "--amplitude", "1", "--omega", "1",
            "--z", "0:6.2832:21", "--t", "0:6.2832:21", "--out", str(out),
        ],
        capsys,
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 21 * 21
    first = lines[1].split(",")
    # row (t=0, z=0): E = (2,0,0), U = 2, R = 2, I = 2, v defined
    assert first[0] == "0" and first[3] == "0"
    assert first[4] == "2"
    assert first[10] == "2"
    assert first[14] == "2"
    assert first[15] == "2"
    assert first[19] == "1"


def test_identical_runs_are_byte_identical(tmp_path, capsys):
    args = [
        "standing-wave", "--amplitude", "1", "--omega", "1",
        "--z", "0:6.2832:31", "--t", "0:6.2832:7",
    ]
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert _run(args + ["--out", str(out1)], capsys)[0] == 0
    assert _run(args + ["--out", str(out2)], capsys)[0] == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_json_output_round_trips_at_emitted_precision(tmp_path, capsys):
    digits = 9
    out = tmp_path / "scan.json"
    code, _, _ = _run(
        [
            "plane-wave", "--amplitude", "1.25", "--omega", "2.0",
            "--z", "0:3:7", "--t", "0:2:5",
            "--format", "json", "--digits", str(digits), "--out", str(out),
        ],
        capsys,
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["digits"] == digits

    from emflow import PlaneWaveSpec, traveling_plane_wave

    source = traveling_plane_wave(PlaneWaveSpec(amplitude=1.25, omega=2.0, direction=1), UNITS)
    line = ScanLine(Vec3(0, 0, 0), Z_HAT, 3.0, 7)
    expected = scan(source, line, linspace(0.0, 2.0, 5), UNITS)

    def rounded(x):
        if x == 0.0:
            x = 0.0
        return float(f"{x:.{digits}g}")

    assert len(doc["records"]) == len(expected.records)
    for rec_json, rec in zip(doc["records"], expected.records):
        assert rec_json["t"] == rounded(rec.point.t)
        assert rec_json["e"] == [rounded(rec.field.e.x), rounded(rec.field.e.y), rounded(rec.field.e.z)]
        assert rec_json["u"] == rounded(rec.sample.u)
        assert rec_json["reactive"] == rounded(rec.sample.reactive)
        assert rec_json["v"] == [rounded(rec.sample.v.x), rounded(rec.sample.v.y), rounded(rec.sample.v.z)]
        assert rec_json["v_defined"] == rec.sample.v_defined


def test_dipole_scan_runs(tmp_path, capsys):
    out = tmp_path / "dipole.csv"
    code, _, _ = _run(
        [
            "dipole", "--amplitude", "1", "--tau", "6", "--omega0", "1",
            "--direction", "1,0,0", "--r", "10:40:4", "--t", "20",
            "--out", str(out),
        ],
        capsys,
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 5


# ----------------------------------------------------------------- nodes


def test_nodes_command_prints_traveling_plane_positions(capsys):
    code, out, _ = _run(
        ["nodes", "--target", "R", "--t", "0.3", "--omega", "1",
         "--z", "0:6.2832", "--tol", "1e-8"],
        capsys,
    )
    assert code == 0
    lines = [line for line in out.splitlines() if line.strip()]
    assert len(lines) == 4
    positions = [float(line.split()[0]) for line in lines]
    expected = [
        math.pi / 2 - 0.3, math.pi / 2 + 0.3,
        3 * math.pi / 2 - 0.3, 3 * math.pi / 2 + 0.3,
    ]
    for got, want in zip(positions, expected):
        assert got == pytest.approx(want, abs=1e-6)


def test_nodes_command_time_scan_to_json(tmp_path, capsys):
    out = tmp_path / "nodes.json"
    code, _, _ = _run(
        ["nodes", "--target", "v", "--z", "0.8", "--omega", "1",
         "--t", "0:6.2832", "--format", "json", "--out", str(out)],
        capsys,
    )
    assert code == 0
    doc = json.loads(out.read_text())
    positions = [node["position"] for node in doc["nodes"]]
    expected = [0.0, math.pi / 2, math.pi, 3 * math.pi / 2, 2 * math.pi]
    assert len(positions) == len(expected)
    for got, want in zip(positions, expected):
        assert got == pytest.approx(want, abs=1e-6)


def test_nodes_command_requires_exactly_one_interval(capsys):
    code, _, err = _run(
        ["nodes", "--z", "0:6.28", "--t", "0:6.28"], capsys
    )
    assert code == 2
    assert "interval" in err


# --------------------------------------------------------------- residual


def test_residual_command_csv(capsys):
    code, out, _ = _run(
        ["residual", "--src", "dipole", "--tau", "6", "--omega0", "1",
         "--point", "18.4,15.1,0,9.7"],
        capsys,
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,x,y,z,h_t,h_x,residual,residual_half,ratio"
    ratio = float(lines[1].split(",")[-1])
    assert 3.5 <= ratio <= 4.5


def test_residual_command_multiple_points_json(capsys):
    code, out, _ = _run(
        ["residual", "--src", "standing-wave", "--omega", "1",
         "--point", "0.23,0,0,0.7", "--point", "0.45,0,0,1.1",
         "--ht", "1e-3", "--hx", "2e-3", "--format", "json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc) == 2
    assert all(abs(entry["residual"]) < 1e-4 for entry in doc)


# ------------------------------------------------------------- config file


def test_config_file_supplies_defaults_and_flags_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# scan configuration\n"
        "amplitude = 1.0\n"
        "omega = 1.0\n"
        "z = 0:6.2832:5\n"
        "t = 1.0\n"
    )
    base = ["standing-wave", "--config", str(cfg)]
    code, out, _ = _run(base, capsys)
    assert code == 0
    u_omega1 = float(out.splitlines()[1].split(",")[10])
    # U(z=0, t=1) = 2 cos^2(omega): the flag must override the config value
    assert u_omega1 == pytest.approx(2 * math.cos(1.0) ** 2, rel=1e-6)
    code, out, _ = _run(base + ["--omega", "2.0"], capsys)
    assert code == 0
    u_omega2 = float(out.splitlines()[1].split(",")[10])
    assert u_omega2 == pytest.approx(2 * math.cos(2.0) ** 2, rel=1e-6)


def test_config_file_rejects_malformed_lines(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("omega 2.0\n")
    code, _, err = _run(["standing-wave", "--config", str(cfg)], capsys)
    assert code == 2
    assert "key = value" in err


def test_config_file_cannot_nest(tmp_path, capsys):
    inner = tmp_path / "inner.cfg"
    inner.write_text("omega = 1.0\n")
    cfg = tmp_path / "outer.cfg"
    cfg.write_text(f"config = {inner}\n")
    code, _, err = _run(["standing-wave", "--config", str(cfg)], capsys)
    assert code == 2
    assert "nest" in err


# -------------------------------------------------------------- exit codes


def test_unknown_subcommand_is_a_usage_error(capsys):
    assert _run(["frobnicate"], capsys)[0] == 2


def test_malformed_range_is_a_usage_error(capsys):
    code, _, _ = _run(
        ["standing-wave", "--z", "0:1", "--t", "0"], capsys
    )
    assert code == 2


def test_nonpositive_omega_is_a_validation_error(capsys):
    code, _, err = _run(
        ["standing-wave", "--omega", "-1", "--z", "0:1:3", "--t", "0"], capsys
    )
    assert code == 2
    assert "omega" in err


def test_bad_digits_is_a_validation_error(capsys):
    code, _, err = _run(
        ["standing-wave", "--z", "0:1:3", "--t", "0", "--digits", "40"], capsys
    )
    assert code == 2
    assert "digits" in err


def test_singular_scan_is_a_computation_error_and_leaves_no_file(tmp_path, capsys):
    out = tmp_path / "never.csv"
    code, _, err = _run(
        ["dipole", "--tau", "1", "--r=-1:1:3", "--t", "0", "--out", str(out)],
        capsys,
    )
    assert code == 1
    assert "singular" in err
    assert not out.exists()


def test_unwritable_output_is_a_computation_error(tmp_path, capsys):
    # the output path is a directory, so the write itself fails
    code, _, err = _run(
        ["standing-wave", "--z", "0:1:3", "--t", "0", "--out", str(tmp_path)], capsys
    )
    assert code == 1
    assert "cannot write output" in err


def test_emit_marks_interrupted_file_incomplete(tmp_path, monkeypatch):
    import builtins

    from emflow.cli import _emit

    out = tmp_path / "partial.csv"
    real_open = builtins.open

    class ExplodingHandle:
        def __init__(self, handle):
            self._handle = handle

        def write(self, text):
            self._handle.write(text[:10])
            raise OSError("disk full")

        def __enter__(self):
            return self

        def __exit__(self, *exc):
            self._handle.close()
            return False

    def fake_open(path, mode="r", **kwargs):
        if str(path) == str(out) and mode == "w":
            return ExplodingHandle(real_open(path, mode, **kwargs))
        return real_open(path, mode, **kwargs)

    monkeypatch.setattr(builtins, "open", fake_open)
    with pytest.raises(OSError):
        _emit("header\nrow1\nrow2\n", out)
    monkeypatch.undo()
    assert out.read_text().rstrip().endswith("# INCOMPLETE")


def test_help_exits_zero(capsys):
    assert _run(["--help"], capsys)[0] == 0


# ------------------------------------------------------------- module mode


def test_module_invocation_smoke(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "emflow", "standing-wave",
         "--z", "0:6.2832:3", "--t", "0"],
        capture_output=True,
        text=True,
        cwd=tmp_path,
        env={**os.environ, "PYTHONPATH": str(Path(__file__).resolve().parent.parent / "src")},
    )
    assert result.returncode == 0
    assert result.stdout.splitlines()[0] == CSV_HEADER
