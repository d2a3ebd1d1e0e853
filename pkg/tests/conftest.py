"""Shared fixtures and test-side path setup."""

import sys
from pathlib import Path

import pytest

# make tests/oracles importable regardless of how pytest was invoked
sys.path.insert(0, str(Path(__file__).resolve().parent))

from oscsync.model import InitialState, ModelParams  # noqa: E402


@pytest.fixture(scope="session")
def ohmic_params() -> ModelParams:
    """Workhorse parameter set: moderate coupling, 10% detuning."""
    return ModelParams.from_detuning(omega0=1.0, delta_omega=0.1, alpha=0.16, omega_c=3.0)


@pytest.fixture(scope="session")
def symmetric_start() -> InitialState:
    return InitialState.from_positions(0.5, 0.5)


@pytest.fixture(scope="session")
def antisymmetric_start() -> InitialState:
    return InitialState.from_positions(0.5, -0.5)
