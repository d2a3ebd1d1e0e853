"""Localized-mode (dissipationless) pole condition and phase diagram.

A negative-frequency pole omega' of the propagator, outside the bath
continuum, carries undamped oscillation.  Its location solves

    F(w') = w' - w0 (w'^2 + w0^2 - dw^2) / (w'^2 + w0^2 + dw^2)
               - Sigma(w') (w'^2 + w0^2) / (w'^2 + w0^2 + dw^2) = 0

with Sigma the bath self-energy.  The pole first appears at the critical
coupling alpha_c = (w0^2 - dw^2) / (2 w_c w0 Gamma(s)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from oscsync.bath import SpectralDensity, gamma_fn, self_energy
from oscsync.model import ModelParams

SCAN_POINTS = 200
SCAN_FLOOR = 1e-9  # scan endpoint nearest zero, in units of omega0
SCAN_CEIL = 10.0  # scan endpoint magnitude, in units of omega_c
F_TOL = 1e-12  # residual target on |F|, in units of omega0
MAX_BISECT = 300
ONSET_TOL = 1e-8  # bisection width on alpha for pole_onset


@dataclass(frozen=True)
class PoleResult:
    """Localized-mode search outcome.

    omega_prime is the pole frequency (< 0) or None when no pole exists;
    localized is True exactly when the pole exists.
    """

    omega_prime: float | None
    alpha_c: float
    localized: bool


@dataclass(frozen=True)
class PhaseDiagram:
    """Raster of omega'/omega0 over (alpha, delta_omega/omega0).

    omega_prime[i, j] corresponds to (delta_ratios[i], alphas[j]) and is
    nan where no pole exists.  boundary_alpha_c holds the closed-form
    critical coupling per detuning row.
    """

    alphas: np.ndarray
    delta_ratios: np.ndarray
    omega_prime: np.ndarray
    boundary_alpha_c: np.ndarray
    omega0: float
    omega_c: float
    s: float


def critical_coupling(params: ModelParams) -> float:
    """Coupling at which the localized pole first appears."""
    w0, dw = params.omega0, params.delta_omega
    return (w0 * w0 - dw * dw) / (2.0 * params.omega_c * w0 * gamma_fn(params.s))


def _scan_grid(omega0: float, omega_c: float) -> np.ndarray:
    # ascending in omega': from -SCAN_CEIL*omega_c up to -SCAN_FLOOR*omega0
    return -np.logspace(
        math.log10(SCAN_CEIL * omega_c), math.log10(SCAN_FLOOR * omega0), SCAN_POINTS
    )


def find_pole(params: ModelParams) -> PoleResult:
    """Bracket and bisect the pole condition on omega' in [-10 w_c, 0).

    Scans F on a log-spaced grid, bisects the first sign change down to
    |F| <= 1e-12 * omega0.  Absence of a sign change is a valid outcome
    (no localized mode), not an error.
    """
    alpha_c = critical_coupling(params)
    w0, dw = params.omega0, params.delta_omega
    if params.alpha == 0.0:
        return PoleResult(omega_prime=None, alpha_c=alpha_c, localized=False)
    sd = SpectralDensity(alpha=params.alpha, omega_c=params.omega_c, s=params.s)

    def f_of(w: float) -> float:
        r2 = w * w + w0 * w0
        den = r2 + dw * dw
        return w - w0 * (r2 - dw * dw) / den - self_energy(sd, w) * r2 / den

    grid = _scan_grid(w0, params.omega_c)
    vals = np.array([f_of(w) for w in grid])
    bracket = None
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            return PoleResult(omega_prime=float(grid[i]), alpha_c=alpha_c, localized=True)
        if vals[i] * vals[i + 1] < 0.0:
            bracket = (float(grid[i]), float(grid[i + 1]), float(vals[i]))
            break
    if bracket is None:
        return PoleResult(omega_prime=None, alpha_c=alpha_c, localized=False)

    a, b, fa = bracket
    tol = F_TOL * w0
    mid = 0.5 * (a + b)
    for _ in range(MAX_BISECT):
        mid = 0.5 * (a + b)
        fm = f_of(mid)
        if abs(fm) <= tol:
            return PoleResult(omega_prime=mid, alpha_c=alpha_c, localized=True)
        if fa * fm < 0.0:
            b = mid
        else:
            a, fa = mid, fm
    raise RuntimeError(
        f"pole bisection failed to reach |F| <= {tol:g} within {MAX_BISECT} steps "
        f"(bracket [{a:g}, {b:g}])"
    )


def pole_onset(params: ModelParams, alpha_hi: float | None = None, tol: float = ONSET_TOL) -> float:
    """Smallest coupling with a localized pole, by bisection on existence.

    Uses the linearity of the self-energy in alpha: the scan-grid
    self-energy is evaluated once at alpha = 1 and rescaled per probe, so
    each bisection step costs one vectorized pass.
    """
    w0, dw = params.omega0, params.delta_omega
    grid = _scan_grid(w0, params.omega_c)
    sd_unit = SpectralDensity(alpha=1.0, omega_c=params.omega_c, s=params.s)
    sigma_unit = np.array([self_energy(sd_unit, w) for w in grid])
    r2 = grid * grid + w0 * w0
    den = r2 + dw * dw
    bare = grid - w0 * (r2 - dw * dw) / den
    weight = r2 / den

    def exists(alpha: float) -> bool:
        vals = bare - alpha * sigma_unit * weight
        return bool(np.any(vals[:-1] * vals[1:] <= 0.0))

    lo = 0.0
    hi = alpha_hi if alpha_hi is not None else 3.0 * critical_coupling(params)
    for _ in range(60):
        if exists(hi):
            break
        hi *= 2.0
    else:
        raise RuntimeError(f"no pole found up to alpha = {hi:g}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if exists(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def phase_diagram(
    alphas,
    delta_ratios,
    omega_c: float,
    s: float = 1.0,
    omega0: float = 1.0,
) -> PhaseDiagram:
    """Rasterize omega'/omega0 over the (alpha, detuning) plane.

    Cells without a pole carry nan; the boundary row holds the analytic
    critical coupling for each detuning.
    """
    alphas = np.asarray(alphas, dtype=float)
    delta_ratios = np.asarray(delta_ratios, dtype=float)
    if alphas.size == 0 or delta_ratios.size == 0:
        raise ValueError("alpha and detuning grids must be non-empty")
    field = np.full((delta_ratios.size, alphas.size), np.nan)
    boundary = np.empty(delta_ratios.size)
    for i, d in enumerate(delta_ratios):
        base = ModelParams.from_detuning(
            omega0=omega0, delta_omega=d * omega0, alpha=0.0, omega_c=omega_c, s=s
        )
        boundary[i] = critical_coupling(base)
        for j, a in enumerate(alphas):
            res = find_pole(
                ModelParams.from_detuning(
                    omega0=omega0, delta_omega=d * omega0, alpha=float(a), omega_c=omega_c, s=s
                )
            )
            if res.localized:
                field[i, j] = res.omega_prime / omega0
    return PhaseDiagram(
        alphas=alphas,
        delta_ratios=delta_ratios,
        omega_prime=field,
        boundary_alpha_c=boundary,
        omega0=omega0,
        omega_c=omega_c,
        s=s,
    )
