"""CLI contract: config validation, outputs, exit codes, overrides."""

import json
import subprocess
import textwrap

import pytest

from oscsync.cli import main

DYNAMICS_TINY = """
    omega0 = 1.0
    delta_omega = 0.1
    alpha = 0.16
    omega_c = 3.0
    x1 = 0.5
    x2 = 0.5
    t_max = 2.0
    dt = 0.02
    n_cap = 6
    output_stride = 5
"""

SWEEP_TINY = """
    omega0 = 1.0
    delta_omega = 0.1
    omega_c = 3.0
    t_max = 20.0
    dt = 0.04
    n_cap = 6
    output_stride = 3
    alpha_grid = [0.01, 0.16]
    delta_ratios = [0.1]
    alpha_lo = 0.005
    alpha_hi = 0.1
"""


def write_config(tmp_path, body, name="run.toml"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(body))
    return path


def read_rows(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


def test_help_via_entry_point():
    proc = subprocess.run(["oscsync", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "dynamics" in proc.stdout


class TestDynamics:
    def test_tiny_run_writes_observables(self, tmp_path):
        cfg = write_config(tmp_path, DYNAMICS_TINY)
        out = tmp_path / "out"
        assert main(["dynamics", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_rows(out / "observables.csv")
        assert header == ["t", "x1", "x2", "p1", "p2", "n1", "n2", "trace", "min_eig"]
        assert len(rows) == 21  # steps 0, 5, ..., 100 at dt = 0.02
        # t = 0 mean position carries the ~1e-7 truncation loss of cap 6
        assert float(rows[0][1]) == pytest.approx(0.5, abs=1e-6)
        meta = json.loads((out / "meta.json").read_text())
        assert meta["command"] == "dynamics"
        assert meta["outputs"] == ["observables.csv"]

    def test_rerun_is_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, DYNAMICS_TINY)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["dynamics", "--config", str(cfg), "--out", str(out1)])
        main(["dynamics", "--config", str(cfg), "--out", str(out2)])
        assert (out1 / "observables.csv").read_bytes() == (out2 / "observables.csv").read_bytes()

    def test_write_coeffs_sidecar(self, tmp_path):
        cfg = write_config(tmp_path, DYNAMICS_TINY + "write_coeffs = true\n")
        out = tmp_path / "out"
        assert main(["dynamics", "--config", str(cfg), "--out", str(out)]) == 0
        meta = json.loads((out / "meta.json").read_text())
        assert meta["outputs"] == ["coeffs.csv", "observables.csv"]
        header, rows = read_rows(out / "coeffs.csv")
        assert header[:3] == ["t", "re_u", "im_u"]
        assert float(rows[0][1]) == 1.0

    def test_ncap_override_lands_in_meta(self, tmp_path):
        cfg = write_config(tmp_path, DYNAMICS_TINY)
        out = tmp_path / "out"
        assert main(["dynamics", "--config", str(cfg), "--out", str(out), "--ncap", "7"]) == 0
        meta = json.loads((out / "meta.json").read_text())
        assert meta["config"]["n_cap"] == 7

    def test_oversized_initial_state_fails_in_preparation_stage(self, tmp_path, capsys):
        cfg = write_config(tmp_path, DYNAMICS_TINY.replace("x1 = 0.5", "x1 = 5.0"))
        rc = main(["dynamics", "--config", str(cfg), "--out", str(tmp_path / "out")])
        assert rc == 1
        assert "initial-state preparation" in capsys.readouterr().err


def test_coeffs_subcommand(tmp_path):
    cfg = write_config(
        tmp_path,
        """
        omega0 = 1.0
        delta_omega = 0.1
        alpha = 0.16
        omega_c = 3.0
        t_max = 2.0
        dt = 0.02
        """,
    )
    out = tmp_path / "out"
    assert main(["coeffs", "--config", str(cfg), "--out", str(out)]) == 0
    header, rows = read_rows(out / "coeffs.csv")
    assert len(rows) == 101
    assert float(rows[0][header.index("re_u")]) == 1.0
    assert float(rows[0][header.index("im_u")]) == 0.0


class TestConfigErrors:
    def run_dynamics(self, tmp_path, body):
        cfg = write_config(tmp_path, body)
        return main(["dynamics", "--config", str(cfg), "--out", str(tmp_path / "out")])

    def test_unknown_key_is_named(self, tmp_path, capsys):
        assert self.run_dynamics(tmp_path, DYNAMICS_TINY + "bogus_knob = 1\n") == 2
        err = capsys.readouterr().err
        assert err.startswith("config error:")
        assert "bogus_knob" in err

    def test_missing_omega_c(self, tmp_path, capsys):
        body = DYNAMICS_TINY.replace("omega_c = 3.0", "")
        assert self.run_dynamics(tmp_path, body) == 2
        assert "omega_c" in capsys.readouterr().err

    def test_unparseable_toml(self, tmp_path, capsys):
        assert self.run_dynamics(tmp_path, "omega_c = = 3.0\n") == 2
        assert "config error" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        rc = main(["dynamics", "--config", str(tmp_path / "nope.toml"), "--out", str(tmp_path)])
        assert rc == 2
        assert "cannot read" in capsys.readouterr().err

    def test_negative_coupling(self, tmp_path, capsys):
        assert self.run_dynamics(tmp_path, DYNAMICS_TINY.replace("alpha = 0.16", "alpha = -0.1")) == 2
        assert "alpha" in capsys.readouterr().err

    def test_zero_workers(self, tmp_path, capsys):
        cfg = write_config(tmp_path, DYNAMICS_TINY)
        rc = main(["dynamics", "--config", str(cfg), "--out", str(tmp_path / "o"), "--workers", "0"])
        assert rc == 2
        assert "--workers" in capsys.readouterr().err


class TestSweepSync:
    def test_tiny_sweep_writes_both_files(self, tmp_path):
        cfg = write_config(tmp_path, SWEEP_TINY)
        out = tmp_path / "out"
        assert main(["sweep-sync", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_rows(out / "sync_sweep.csv")
        assert header == ["alpha", "freq1", "freq2", "locked"]
        assert [r[0] for r in rows] == ["0.01", "0.16"]
        assert [r[3] for r in rows] == ["0", "1"]
        bheader, brows = read_rows(out / "boundary.csv")
        assert bheader == ["delta_omega", "alpha_star"]
        assert 0.005 < float(brows[0][1]) < 0.1
        meta = json.loads((out / "meta.json").read_text())
        assert meta["outputs"] == ["boundary.csv", "sync_sweep.csv"]

    def test_empty_alpha_grid(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "omega_c = 3.0\nalpha_grid = []\n")
        assert main(["sweep-sync", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
        assert "alpha_grid" in capsys.readouterr().err

    def test_no_sweep_requested(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "omega_c = 3.0\n")
        assert main(["sweep-sync", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
        assert "no sweep requested" in capsys.readouterr().err


def test_phase_diagram_small_raster(tmp_path):
    cfg = write_config(
        tmp_path,
        """
        omega_c = 3.0
        alpha_max = 0.3
        alpha_num = 4
        delta_max = 0.2
        delta_num = 2
        """,
    )
    out = tmp_path / "out"
    assert main(["phase-diagram", "--config", str(cfg), "--out", str(out)]) == 0
    header, rows = read_rows(out / "phase_diagram.csv")
    assert header == ["alpha", "delta_omega", "omega_prime_over_omega0"]
    assert len(rows) == 8
    cells = [r[2] for r in rows]
    assert any(c == "nan" for c in cells)  # below onset
    assert any(float(c) < 0.0 for c in cells if c != "nan")
    bheader, brows = read_rows(out / "phase_boundary.csv")
    assert bheader == ["delta_omega", "alpha_c"]
    assert len(brows) == 2
    assert float(brows[0][1]) == pytest.approx(1.0 / 6.0, rel=1e-12)


class TestPole:
    def run_pole(self, tmp_path, alpha):
        body = f"omega0 = 1.0\ndelta_omega = 0.1\nalpha = {alpha}\nomega_c = 3.0\n"
        cfg = write_config(tmp_path, body)
        return main(["pole", "--config", str(cfg)])

    def test_localized(self, tmp_path, capsys):
        assert self.run_pole(tmp_path, 0.24) == 0
        out = capsys.readouterr().out
        assert out.startswith("pole: omega_prime_over_omega0 = -0.21293989")
        assert "alpha_c = 0.165" in out

    def test_not_localized(self, tmp_path, capsys):
        assert self.run_pole(tmp_path, 0.01) == 0
        assert capsys.readouterr().out.startswith("no pole: alpha_c = 0.165")
