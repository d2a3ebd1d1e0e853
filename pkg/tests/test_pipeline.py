"""End-to-end runs, sweep parallelism, CSV/meta writers."""

import json

import numpy as np
import pytest

from oscsync.analysis import ProbeSettings
from oscsync.model import InitialState, ModelParams
from oscsync.pipeline import (
    COEFF_HEADER,
    OBSERVABLE_HEADER,
    DynamicsSettings,
    coeff_rows,
    format_value,
    observable_rows,
    phase_diagram_parallel,
    run_dynamics,
    sweep_alpha,
    sweep_boundary,
    write_csv,
    write_meta,
)

FAST_PROBE = ProbeSettings(t_max=20.0, dt_master=0.04, n_cap=6, output_stride=3)


@pytest.fixture(scope="module")
def tiny_run(ohmic_params, symmetric_start):
    settings = DynamicsSettings(t_max=5.0, dt_master=0.05, n_cap=6, output_stride=2)
    return run_dynamics(ohmic_params, symmetric_start, settings)


class TestRunDynamics:
    def test_grids_are_consistent(self, tiny_run):
        result, traj = tiny_run
        assert result.times[0] == 0.0
        assert result.times[-1] == pytest.approx(5.0)
        assert np.allclose(np.diff(result.times), 0.1)
        # coefficient grid is twice as fine and spans the same window
        assert traj.times[-1] == pytest.approx(5.0)
        assert traj.u.size == 2 * round(5.0 / 0.05) + 1

    def test_rows_match_header_widths(self, tiny_run):
        result, traj = tiny_run
        rows = observable_rows(result, with_logneg=False)
        assert len(rows) == result.times.size
        assert all(len(r) == len(OBSERVABLE_HEADER) for r in rows)
        crows = coeff_rows(traj)
        assert len(crows) == traj.u.size
        assert all(len(r) == len(COEFF_HEADER) for r in crows)
        assert crows[0][COEFF_HEADER.index("re_u")] == pytest.approx(1.0)

    def test_logneg_rows_require_recording(self, tiny_run):
        result, _ = tiny_run
        with pytest.raises(ValueError):
            observable_rows(result, with_logneg=True)


class TestSweeps:
    def test_alpha_sweep_brackets_the_transition(self, symmetric_start):
        base = ModelParams.from_detuning(omega0=1.0, delta_omega=0.1, alpha=0.0, omega_c=3.0)
        rows = sweep_alpha(base, [0.01, 0.16], symmetric_start, FAST_PROBE)
        assert [r.alpha for r in rows] == [0.01, 0.16]
        assert not rows[0].locked
        assert rows[1].locked
        assert abs(rows[1].freq1 - rows[1].freq2) < abs(rows[0].freq1 - rows[0].freq2)

    def test_parallel_sweep_matches_serial(self, symmetric_start):
        base = ModelParams.from_detuning(omega0=1.0, delta_omega=0.1, alpha=0.0, omega_c=3.0)
        serial = sweep_alpha(base, [0.01, 0.16], symmetric_start, FAST_PROBE, workers=1)
        parallel = sweep_alpha(base, [0.01, 0.16], symmetric_start, FAST_PROBE, workers=2)
        assert serial == parallel

    def test_boundary_sweep_single_detuning(self, symmetric_start):
        base = ModelParams.from_detuning(omega0=1.0, delta_omega=0.0, alpha=0.0, omega_c=3.0)
        rows = sweep_boundary(base, [0.1], (0.005, 0.1), symmetric_start, FAST_PROBE)
        assert len(rows) == 1
        assert rows[0].delta_omega == pytest.approx(0.1)
        assert 0.005 < rows[0].alpha_star < 0.1

    def test_parallel_phase_diagram_matches_serial(self):
        alphas = [0.05, 0.2, 0.3]
        deltas = [0.0, 0.1]
        serial = phase_diagram_parallel(alphas, deltas, omega_c=3.0, workers=1)
        parallel = phase_diagram_parallel(alphas, deltas, omega_c=3.0, workers=2)
        np.testing.assert_array_equal(serial.omega_prime, parallel.omega_prime)
        np.testing.assert_array_equal(serial.boundary_alpha_c, parallel.boundary_alpha_c)


class TestWriters:
    def test_format_value_kinds(self):
        assert format_value(True) == "1"
        assert format_value(False) == "0"
        assert format_value(np.bool_(True)) == "1"
        assert format_value(7) == "7"
        assert format_value(np.int64(-3)) == "-3"
        x = 0.1234567890123456789
        assert float(format_value(x)) == x  # 17g round-trips doubles

    def test_write_csv_deterministic(self, tmp_path):
        rows = [(0.0, 1.5), (0.1, -2.25)]
        p1 = write_csv(tmp_path / "a.csv", ["t", "y"], rows)
        p2 = write_csv(tmp_path / "b.csv", ["t", "y"], rows)
        b1, b2 = p1.read_bytes(), p2.read_bytes()
        assert b1 == b2
        assert b1.startswith(b"t,y\n")
        assert b1.endswith(b"\n")

    def test_write_csv_rejects_ragged_rows(self, tmp_path):
        with pytest.raises(ValueError):
            write_csv(tmp_path / "bad.csv", ["t", "y"], [(0.0, 1.0), (0.1,)])

    def test_write_meta(self, tmp_path):
        p = write_meta(tmp_path, {"beta": 2, "alpha": 1})
        assert p.name == "meta.json"
        text = p.read_text()
        assert json.loads(text) == {"alpha": 1, "beta": 2}
        assert text.index('"alpha"') < text.index('"beta"')
