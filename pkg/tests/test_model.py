"""Parameter container and lab <-> relative/COM basis transform."""

import math

import pytest
from hypothesis import given, strategies as st

from oscsync.model import InitialState, ModelParams, to_mode_basis, to_relative_basis


def test_mean_and_detuning_split():
    p = ModelParams(omega1=1.1, omega2=0.9, alpha=0.16, omega_c=3.0)
    assert p.omega0 == pytest.approx(1.0)
    assert p.delta_omega == pytest.approx(0.1)


def test_from_detuning_round_trip():
    p = ModelParams.from_detuning(omega0=1.0, delta_omega=0.1, alpha=0.01, omega_c=3.0)
    assert p.omega1 == pytest.approx(1.1)
    assert p.omega2 == pytest.approx(0.9)
    assert p.s == 1.0


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(omega1=1.0, omega2=1.0, alpha=-0.1, omega_c=3.0),
        dict(omega1=1.0, omega2=1.0, alpha=0.1, omega_c=0.0),
        dict(omega1=1.0, omega2=1.0, alpha=0.1, omega_c=3.0, s=0.0),
        dict(omega1=2.5, omega2=-0.5, alpha=0.1, omega_c=3.0),  # |dw| >= w0
    ],
)
def test_invalid_parameters_rejected(kwargs):
    with pytest.raises(ValueError):
        ModelParams(**kwargs)


def test_positions_map_to_real_amplitudes():
    init = InitialState.from_positions(0.5, -0.5)
    assert init.beta1 == pytest.approx(0.5 / math.sqrt(2))
    assert init.beta2 == pytest.approx(-0.5 / math.sqrt(2))


def test_antisymmetric_input_kills_com_mode():
    phi1, phi2 = to_relative_basis(InitialState.from_positions(0.5, -0.5))
    assert phi2 == pytest.approx(0.0)
    assert phi1 == pytest.approx(0.5)


def test_symmetric_input_kills_relative_mode():
    phi1, phi2 = to_relative_basis(InitialState.from_positions(0.5, 0.5))
    assert phi1 == pytest.approx(0.0)
    assert phi2 == pytest.approx(0.5)


complex_amp = st.builds(
    complex,
    st.floats(min_value=-10, max_value=10, allow_nan=False),
    st.floats(min_value=-10, max_value=10, allow_nan=False),
)


@given(b1=complex_amp, b2=complex_amp)
def test_basis_transform_round_trips(b1, b2):
    state = InitialState(beta1=b1, beta2=b2)
    back = to_mode_basis(*to_relative_basis(state))
    assert abs(back.beta1 - b1) <= 1e-14 * (1 + abs(b1))
    assert abs(back.beta2 - b2) <= 1e-14 * (1 + abs(b2))


@given(b1=complex_amp, b2=complex_amp)
def test_basis_transform_preserves_norm(b1, b2):
    phi1, phi2 = to_relative_basis(InitialState(beta1=b1, beta2=b2))
    lab = abs(b1) ** 2 + abs(b2) ** 2
    rot = abs(phi1) ** 2 + abs(phi2) ** 2
    assert rot == pytest.approx(lab, rel=1e-12, abs=1e-12)
