"""Generator assembly, density-matrix propagation, entanglement measure."""

import numpy as np
import pytest

from oscsync.coeffs import mean_values, solve_coeffs
from oscsync.fockspace import DensityMatrix, FockBasis, coherent_state
from oscsync.master import (
    HermiticityError,
    SingularDeterminantError,
    build_generator,
    evolve,
    log_negativity,
)
from oscsync.model import InitialState, ModelParams, to_relative_basis


def make_generator(alpha, delta, t_max=10.0, dt=0.01):
    params = ModelParams.from_detuning(
        omega0=1.0, delta_omega=delta, alpha=alpha, omega_c=3.0
    )
    traj = solve_coeffs(params, t_max, dt=dt)
    return params, traj, build_generator(traj)


class TestGenerator:
    def test_free_limit_recovers_bare_coefficients(self):
        _, _, gen = make_generator(alpha=0.0, delta=0.1)
        assert np.max(np.abs(gen.Omega11 - 1.0)) <= 1e-8
        assert np.max(np.abs(gen.Omega21 - 0.1)) <= 1e-8
        assert np.max(np.abs(gen.gamma1)) <= 1e-9
        assert np.max(np.abs(gen.gamma2)) <= 1e-9
        assert np.max(np.abs(gen.cross_rate)) <= 1e-8

    def test_initial_values_are_bare(self):
        _, _, gen = make_generator(alpha=0.16, delta=0.1)
        assert gen.Omega11[0] == pytest.approx(1.0, abs=1e-12)
        assert gen.Omega21[0] == pytest.approx(0.1, abs=1e-12)

    def test_zero_detuning_kills_cross_coefficients(self):
        _, _, gen = make_generator(alpha=0.16, delta=0.0)
        assert np.max(np.abs(gen.Omega21)) == 0.0
        assert np.max(np.abs(gen.cross_rate)) == 0.0

    def test_cross_rate_real_part_is_gamma2(self):
        _, _, gen = make_generator(alpha=0.16, delta=0.1)
        assert np.allclose(gen.cross_rate.real, gen.gamma2, atol=1e-15)

    def test_damped_determinant_guard(self):
        # zero detuning keeps det = -x*u, and below the transition |u|
        # decays through a raised floor within the window
        params = ModelParams.from_detuning(
            omega0=1.0, delta_omega=0.0, alpha=0.08, omega_c=3.0
        )
        traj = solve_coeffs(params, 50.0, dt=0.02)
        with pytest.raises(SingularDeterminantError):
            build_generator(traj, d_min=1e-3)


class TestEvolve:
    def test_free_oscillation(self):
        params, traj, gen = make_generator(alpha=0.0, delta=0.0, dt=0.01)
        phi1, phi2 = to_relative_basis(InitialState.from_positions(0.5, 0.5))
        rho0 = coherent_state(FockBasis(8), phi1, phi2)
        res = evolve(rho0, gen, dt_master=0.02, t_max=10.0)
        ref = 0.5 * np.cos(params.omega0 * res.times)
        assert np.max(np.abs(res.x1 - ref)) <= 1e-6
        assert np.max(np.abs(res.x2 - ref)) <= 1e-6

    def test_mean_field_consistency(self):
        # master-equation first moments ride the coefficient solution
        params, traj, gen = make_generator(alpha=0.16, delta=0.1, dt=0.01)
        init = InitialState(beta1=0.31 + 0.17j, beta2=-0.24 + 0.05j)
        phi1, phi2 = to_relative_basis(init)
        rho0 = coherent_state(FockBasis(10), phi1, phi2)
        res = evolve(rho0, gen, dt_master=0.02, t_max=10.0, output_stride=2)
        means = mean_values(traj, init)
        idx = np.searchsorted(means.times, res.times)
        assert np.max(np.abs(res.x1 - means.x1[idx])) <= 1e-7
        assert np.max(np.abs(res.p2 - means.p2[idx])) <= 1e-7

    def test_trace_and_positivity_records(self):
        _, _, gen = make_generator(alpha=0.24, delta=0.1, dt=0.01)
        rho0 = coherent_state(FockBasis(8), *to_relative_basis(InitialState.from_positions(0.5, -0.5)))
        res = evolve(rho0, gen, dt_master=0.02, t_max=10.0, output_stride=5)
        assert np.max(np.abs(res.trace - 1.0)) <= 1e-10
        assert np.min(res.min_eig) >= -1e-8

    def test_uniform_grid_with_misaligned_stride(self):
        _, _, gen = make_generator(alpha=0.16, delta=0.1, dt=0.01, t_max=2.0)
        rho0 = coherent_state(FockBasis(6), 0.2, 0.1)
        res = evolve(rho0, gen, dt_master=0.02, t_max=2.0, output_stride=7)
        steps = np.diff(res.times)
        assert np.allclose(steps, steps[0], rtol=1e-12)

    def test_step_validation(self):
        _, _, gen = make_generator(alpha=0.16, delta=0.1, dt=0.01, t_max=2.0)
        rho0 = coherent_state(FockBasis(6), 0.2, 0.1)
        with pytest.raises(ValueError):
            evolve(rho0, gen, dt_master=0.03, t_max=1.0)  # odd multiple of dt
        with pytest.raises(ValueError):
            evolve(rho0, gen, dt_master=0.02, t_max=100.0)  # beyond the grid
        with pytest.raises(ValueError):
            evolve(rho0, gen, dt_master=0.02, t_max=1.0, output_stride=0)

    def test_hermiticity_guard_rejects_corrupt_input(self):
        # the propagator preserves hermiticity exactly, so the per-step
        # check can only fire on a state that was never Hermitian
        _, _, gen = make_generator(alpha=0.16, delta=0.1, dt=0.01, t_max=2.0)
        basis = FockBasis(3)
        data = np.zeros((basis.dim, basis.dim), dtype=complex)
        data[0, 0] = 1.0
        data[0, 1] = 0.3  # no conjugate partner
        with pytest.raises(HermiticityError):
            evolve(DensityMatrix(basis, data), gen, dt_master=0.02, t_max=1.0)


class TestLogNegativity:
    def test_vacuum_is_separable(self):
        rho = coherent_state(FockBasis(8), 0.0, 0.0)
        assert log_negativity(rho) == pytest.approx(0.0, abs=1e-12)

    def test_product_coherent_state_is_separable(self):
        # a product of lab coherent states stays product under the rotation;
        # the truncation tail leaves a ~1e-8 floor at this cap
        rho = coherent_state(FockBasis(12), *to_relative_basis(InitialState(0.4, -0.3)))
        assert log_negativity(rho) == pytest.approx(0.0, abs=1e-6)

    def test_single_relative_excitation_is_a_bell_pair(self):
        basis = FockBasis(6)
        data = np.zeros((basis.dim, basis.dim), dtype=complex)
        k = basis.index(1, 0)
        data[k, k] = 1.0
        assert log_negativity(DensityMatrix(basis, data)) == pytest.approx(1.0, abs=1e-12)

    def test_coherent_start_never_entangles(self):
        # zero-temperature damping maps coherent states to coherent states,
        # so a product start stays product along the whole run
        _, _, gen = make_generator(alpha=0.24, delta=0.1, dt=0.01)
        rho0 = coherent_state(FockBasis(8), *to_relative_basis(InitialState.from_positions(0.5, -0.5)))
        res = evolve(rho0, gen, dt_master=0.02, t_max=10.0, output_stride=10, compute_logneg=True)
        assert res.logneg is not None
        assert np.max(res.logneg) <= 1e-4

    def test_bell_pair_entanglement_survives_above_threshold(self):
        # a single relative-mode excitation is a lab-frame Bell pair; its
        # entanglement dies below the transition and persists above it
        finals = {}
        for alpha in (0.08, 0.24):
            _, _, gen = make_generator(alpha=alpha, delta=0.1, t_max=20.0, dt=0.01)
            basis = FockBasis(6)
            data = np.zeros((basis.dim, basis.dim), dtype=complex)
            k = basis.index(1, 0)
            data[k, k] = 1.0
            res = evolve(
                DensityMatrix(basis, data),
                gen,
                dt_master=0.02,
                t_max=20.0,
                output_stride=100,
                compute_logneg=True,
            )
            assert res.logneg[0] == pytest.approx(1.0, abs=1e-9)
            finals[alpha] = res.logneg[-1]
        assert finals[0.08] < 0.01
        assert finals[0.24] > 0.1
