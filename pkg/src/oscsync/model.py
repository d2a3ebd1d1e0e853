"""Model parameters and the mode transform between lab and relative/COM bases.

Two oscillators a1, a2 with frequencies omega1, omega2 couple with opposite
signs to every mode of a common bath.  In the rotated pair

    psi1 = (a1 - a2)/sqrt(2)      (relative mode, the only one seeing the bath)
    psi2 = (a1 + a2)/sqrt(2)      (center-of-mass mode)

the system Hamiltonian becomes omega0*(n1+n2) + delta_omega*(psi1^dag psi2 + h.c.)
with omega0 = (omega1+omega2)/2 and delta_omega = (omega1-omega2)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters: oscillator frequencies and bath coupling.

    Parameters
    ----------
    omega1, omega2 : float
        Bare oscillator frequencies (angular).
    alpha : float
        Dimensionless bath coupling strength, >= 0.
    omega_c : float
        Bath cutoff frequency, > 0.
    s : float
        Spectral exponent of the bath (1 = ohmic), > 0.
    """

    omega1: float
    omega2: float
    alpha: float
    omega_c: float
    s: float = 1.0

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.omega_c <= 0:
            raise ValueError(f"omega_c must be > 0, got {self.omega_c}")
        if self.s <= 0:
            raise ValueError(f"s must be > 0, got {self.s}")
        # detuning must stay below the mean frequency or the rotated picture degenerates
        if abs(self.delta_omega) >= self.omega0:
            raise ValueError(
                "require |omega1 - omega2|/2 < (omega1 + omega2)/2; "
                f"got omega1={self.omega1}, omega2={self.omega2}"
            )

    @property
    def omega0(self) -> float:
        """Mean frequency (omega1 + omega2)/2."""
        return 0.5 * (self.omega1 + self.omega2)

    @property
    def delta_omega(self) -> float:
        """Half detuning (omega1 - omega2)/2."""
        return 0.5 * (self.omega1 - self.omega2)

    @classmethod
    def from_detuning(
        cls,
        omega0: float,
        delta_omega: float,
        alpha: float,
        omega_c: float,
        s: float = 1.0,
    ) -> "ModelParams":
        """Construct from (omega0, delta_omega) instead of (omega1, omega2)."""
        return cls(omega0 + delta_omega, omega0 - delta_omega, alpha, omega_c, s)


@dataclass(frozen=True)
class InitialState:
    """Product coherent state |beta1> x |beta2> of the two lab oscillators.

    <x_j> = sqrt(2) Re(beta_j), <p_j> = sqrt(2) Im(beta_j).
    """

    beta1: complex
    beta2: complex

    @classmethod
    def from_positions(cls, x1: float, x2: float) -> "InitialState":
        """State with <x_j> = x_j and zero mean momentum (beta_j real)."""
        return cls(x1 / SQRT2, x2 / SQRT2)


def to_relative_basis(state: InitialState) -> tuple[complex, complex]:
    """Coherent amplitudes (phi1, phi2) of the relative / center-of-mass modes."""
    phi1 = (state.beta1 - state.beta2) / SQRT2
    phi2 = (state.beta1 + state.beta2) / SQRT2
    return complex(phi1), complex(phi2)


def to_mode_basis(phi1: complex, phi2: complex) -> InitialState:
    """Inverse of `to_relative_basis`."""
    return InitialState(beta1=(phi2 + phi1) / SQRT2, beta2=(phi2 - phi1) / SQRT2)
