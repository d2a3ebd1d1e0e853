"""Coefficient functions (u, v, w, x) of the exact reduced dynamics.

The pair (u, w) propagates a unit excitation of the relative mode, (v, x)
one of the center-of-mass mode:

    u' + i*w0*u + i*dw*w = -Int_0^t mu(t-tau) u(tau) dtau
    v' + i*w0*v + i*dw*x = -Int_0^t mu(t-tau) v(tau) dtau
    w' + i*w0*w + i*dw*u = 0
    x' + i*w0*x + i*dw*v = 0

with u(0) = x(0) = 1, v(0) = w(0) = 0.  Mean values of any initial
coherent state follow linearly:  <psi1> = u*phi1 + v*phi2,
<psi2> = w*phi1 + x*phi2.

Integration: uniform grid, explicit Euler predictor, trapezoidal corrector
iterated to convergence, memory integral by composite trapezoid over the
stored history.  Since that scheme has an even-power error expansion, a
global Richardson pass (step halving) removes the dt^2 term; observed
self-convergence of the returned trajectory is fourth order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from oscsync.bath import MemoryKernel, kernel
from oscsync.model import InitialState, ModelParams, to_relative_basis

DIVERGENCE_LIMIT = 1e6


class StepSizeError(ValueError):
    """dt too coarse to resolve the fastest scale."""


class DivergenceError(RuntimeError):
    """Coefficient magnitude blew past the divergence limit."""


@dataclass
class CoeffTrajectory:
    """Sampled coefficients and their Volterra right-hand sides.

    Derivative arrays hold the corrector's final RHS evaluation at each
    grid point (memory integral included), not finite differences.
    """

    params: ModelParams
    dt: float
    n_steps: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    x: np.ndarray
    du: np.ndarray
    dv: np.ndarray
    dw: np.ndarray
    dx: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1)


@dataclass
class MeanTrajectory:
    """Lab-frame first moments <x_j>, <p_j> on the coefficient grid."""

    times: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray


def default_dt(params: ModelParams) -> float:
    """Default grid step: 200 points per mean period, capped by the cutoff."""
    return min(2.0 * math.pi / (200.0 * params.omega0), 0.05 / params.omega_c)


def _integrate(params: ModelParams, dt: float, n: int):
    """One fixed-step pass; returns (u, v, w, x, du, dv, dw, dx)."""
    w0, dw_ = params.omega0, params.delta_omega
    iw0, idw = 1j * w0, 1j * dw_
    with_memory = params.alpha > 0.0

    # M holds the bath-coupled pair (u, v) for vectorized history dots
    M = np.zeros((n + 1, 2), dtype=complex)
    W = np.zeros(n + 1, dtype=complex)  # w
    X = np.zeros(n + 1, dtype=complex)  # x
    dM = np.zeros((n + 1, 2), dtype=complex)
    dW = np.zeros(n + 1, dtype=complex)
    dX = np.zeros(n + 1, dtype=complex)
    M[0, 0], X[0] = 1.0, 1.0

    if with_memory:
        mu = kernel(MemoryKernel(params.alpha, params.omega_c, params.s), dt * np.arange(n + 1))
        mu0 = mu[0]
    else:
        mu = None
        mu0 = 0.0

    u, v = 1.0 + 0.0j, 0.0 + 0.0j
    wv, xv = 0.0 + 0.0j, 1.0 + 0.0j
    du = -iw0 * u - idw * wv
    dv = -iw0 * v - idw * xv
    dwv = -iw0 * wv - idw * u
    dxv = -iw0 * xv - idw * v
    dM[0] = (du, dv)
    dW[0], dX[0] = dwv, dxv

    half = 0.5 * dt
    for i in range(n):
        k = i + 1
        # history part of the memory integral at t_k (fixed during correction)
        if with_memory:
            hist = 0.5 * mu[k] * M[0]
            if i >= 1:
                hist = hist + mu[1 : k][::-1] @ M[1:k]
            hist = hist * dt
            hu, hv = hist[0], hist[1]
        else:
            hu = hv = 0.0

        # Euler predictor
        un, vn = u + dt * du, v + dt * dv
        wn, xn = wv + dt * dwv, xv + dt * dxv

        # trapezoidal corrector, iterated to fixed point
        for _ in range(12):
            fu = -iw0 * un - idw * wn - (hu + half * mu0 * un)
            fv = -iw0 * vn - idw * xn - (hv + half * mu0 * vn)
            fw = -iw0 * wn - idw * un
            fx = -iw0 * xn - idw * vn
            un1 = u + half * (du + fu)
            vn1 = v + half * (dv + fv)
            wn1 = wv + half * (dwv + fw)
            xn1 = xv + half * (dxv + fx)
            delta = (
                abs(un1 - un) + abs(vn1 - vn) + abs(wn1 - wn) + abs(xn1 - xn)
            )
            un, vn, wn, xn = un1, vn1, wn1, xn1
            if delta < 1e-15:
                break

        fu = -iw0 * un - idw * wn - (hu + half * mu0 * un)
        fv = -iw0 * vn - idw * xn - (hv + half * mu0 * vn)
        fw = -iw0 * wn - idw * un
        fx = -iw0 * xn - idw * vn

        if abs(un) > DIVERGENCE_LIMIT or abs(vn) > DIVERGENCE_LIMIT:
            raise DivergenceError(
                f"coefficient magnitude exceeded {DIVERGENCE_LIMIT:g} at t = {k * dt:g}"
            )

        M[k] = (un, vn)
        W[k], X[k] = wn, xn
        dM[k] = (fu, fv)
        dW[k], dX[k] = fw, fx
        u, v, wv, xv = un, vn, wn, xn
        du, dv, dwv, dxv = fu, fv, fw, fx

    return M[:, 0], M[:, 1], W, X, dM[:, 0], dM[:, 1], dW, dX


def solve_coeffs(params: ModelParams, t_max: float, dt: float | None = None) -> CoeffTrajectory:
    """Solve the coefficient system on [0, t_max] with grid step dt.

    Runs the predictor-corrector at dt and dt/2 and Richardson-combines
    both trajectories (and their RHS arrays), so the returned samples are
    fourth-order accurate.

    Raises
    ------
    StepSizeError
        If dt * max(omega0, omega_c) > 1 (oscillation unresolved).
    DivergenceError
        If any coefficient magnitude exceeds 1e6.
    """
    if dt is None:
        dt = default_dt(params)
    if t_max <= 0:
        raise ValueError(f"t_max must be > 0, got {t_max}")
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if dt * max(params.omega0, params.omega_c) > 1.0:
        raise StepSizeError(
            f"dt = {dt:g} too coarse for max(omega0, omega_c) = "
            f"{max(params.omega0, params.omega_c):g}"
        )
    n = max(1, int(round(t_max / dt)))

    coarse = _integrate(params, dt, n)
    fine = _integrate(params, 0.5 * dt, 2 * n)
    combined = [(4.0 * f[::2] - c) / 3.0 for c, f in zip(coarse, fine)]
    u, v, w, x, du, dv, dw_, dx = combined
    return CoeffTrajectory(params, dt, n, u, v, w, x, du, dv, dw_, dx)


def mean_values(traj: CoeffTrajectory, state: InitialState) -> MeanTrajectory:
    """First moments of the lab oscillators for a coherent initial state."""
    phi1, phi2 = to_relative_basis(state)
    m1 = traj.u * phi1 + traj.v * phi2  # <psi1>
    m2 = traj.w * phi1 + traj.x * phi2  # <psi2>
    a1 = (m2 + m1) / math.sqrt(2.0)
    a2 = (m2 - m1) / math.sqrt(2.0)
    r2 = math.sqrt(2.0)
    return MeanTrajectory(
        times=traj.times,
        x1=r2 * a1.real,
        x2=r2 * a2.real,
        p1=r2 * a1.imag,
        p2=r2 * a2.imag,
    )
