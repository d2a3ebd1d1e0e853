"""Exact time-local master equation for the reduced two-mode state.

The generator is assembled from the coefficient trajectory.  With
D = w v - x u (D(0) = -1) the effective single-particle coefficients are

    Omega11 = i (w v' - x u') / D        on psi1^dag psi1
    Omega21 = i (u' v - u v') / D        on psi1^dag psi2
    bare delta_omega                     on psi2^dag psi1
    bare omega0                          on psi2^dag psi2

and the dissipator is

    gamma1 * psi1 rho psi1^dag
      + (gamma2c/2) * psi2 rho psi1^dag + (gamma2c*/2) * psi1 rho psi2^dag

with gamma1 = -2 Im(Omega11) and the complex cross rate
gamma2c = 2i (Omega21 - delta_omega), whose real part is the usual
gamma2 = -2 Im(Omega21).  This is the unique trace-preserving completion:
it propagates coherent states exactly along the coefficient solution for
every (alpha, delta_omega), which pins both the operator assignment of the
cross coefficients and the imaginary part of the cross rate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from oscsync.coeffs import CoeffTrajectory
from oscsync.fockspace import DensityMatrix, FockBasis, build_operators

D_MIN = 1e-8
DENSE_DIM_LIMIT = 160  # below this, dense matmuls beat sparse-call overhead


class SingularDeterminantError(RuntimeError):
    """|w v - x u| crossed the invertibility floor."""


class TraceDriftError(RuntimeError):
    """Trace left the unit value beyond tolerance."""


class HermiticityError(RuntimeError):
    """Per-step Hermiticity defect beyond tolerance."""


@dataclass
class GeneratorCoeffs:
    """Generator coefficient series on the coefficient grid."""

    dt: float
    omega0: float
    delta_omega: float
    Omega11: np.ndarray  # complex, coefficient of psi1^dag psi1
    Omega21: np.ndarray  # complex, coefficient of psi1^dag psi2
    gamma1: np.ndarray  # real relative-mode rate, -2 Im(Omega11)
    gamma2: np.ndarray  # real part of the cross rate, -2 Im(Omega21)
    cross_rate: np.ndarray  # complex 2i(Omega21 - delta_omega); .real == gamma2

    @property
    def n_steps(self) -> int:
        return len(self.Omega11) - 1


def build_generator(traj: CoeffTrajectory, d_min: float = D_MIN) -> GeneratorCoeffs:
    """Generator coefficients from a coefficient trajectory.

    Raises SingularDeterminantError (reporting the crossing time) if
    |w v - x u| dips to d_min anywhere on the grid; the determinant decays
    with the accumulated damping, so very deep overdamped runs can trip it.
    """
    det = traj.w * traj.v - traj.x * traj.u
    bad = np.abs(det) <= d_min
    if np.any(bad):
        t_cross = traj.dt * int(np.argmax(bad))
        raise SingularDeterminantError(
            f"|wv - xu| reached {d_min:g} at t = {t_cross:g}; "
            "generator coefficients are singular there"
        )
    om11 = 1j * (traj.w * traj.dv - traj.x * traj.du) / det
    om21 = 1j * (traj.du * traj.v - traj.u * traj.dv) / det
    dw = traj.params.delta_omega
    return GeneratorCoeffs(
        dt=traj.dt,
        omega0=traj.params.omega0,
        delta_omega=dw,
        Omega11=om11,
        Omega21=om21,
        gamma1=-2.0 * om11.imag,
        gamma2=-2.0 * om21.imag,
        cross_rate=2j * (om21 - dw),
    )


@dataclass
class EvolutionResult:
    """Observable records of a master-equation run."""

    times: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    trace: np.ndarray
    min_eig: np.ndarray
    logneg: np.ndarray | None
    final: DensityMatrix


def _right_mul(rho: np.ndarray, op_t) -> np.ndarray:
    # rho @ op  via  (op.T @ rho.T).T  keeping the sparse matrix on the left
    return (op_t @ rho.T).T


def evolve(
    rho0: DensityMatrix,
    gen: GeneratorCoeffs,
    dt_master: float | None = None,
    t_max: float | None = None,
    output_stride: int = 1,
    compute_logneg: bool = False,
    herm_tol: float = 1e-10,
    trace_tol: float = 1e-6,
) -> EvolutionResult:
    """Propagate rho0 with classical RK4 on the master-equation generator.

    dt_master must be an even multiple of the coefficient grid step so the
    RK4 midpoints land exactly on stored coefficient samples.  Each step
    asserts the Hermiticity defect (< herm_tol) before symmetrizing and the
    trace (|Tr rho - 1| < trace_tol).

    Observables are recorded every output_stride steps, so the returned
    time grid is always uniform; when the step count is not a multiple of
    the stride the endpoint appears only in ``final``.
    """
    if dt_master is None:
        dt_master = 2.0 * gen.dt
    ratio_f = dt_master / gen.dt
    ratio = int(round(ratio_f))
    if abs(ratio_f - ratio) > 1e-9 or ratio < 2 or ratio % 2 != 0:
        raise ValueError(
            f"dt_master = {dt_master:g} must be an even multiple of the "
            f"coefficient step {gen.dt:g}"
        )
    n_avail = gen.n_steps // ratio
    if t_max is None:
        n_master = n_avail
    else:
        n_master = int(round(t_max / dt_master))
        if n_master > n_avail:
            raise ValueError(
                f"t_max = {t_max:g} exceeds the coefficient grid span "
                f"{gen.n_steps * gen.dt:g}"
            )
    if output_stride < 1:
        raise ValueError(f"output_stride must be >= 1, got {output_stride}")

    ops = build_operators(rho0.basis)
    psi1, psi2 = ops.psi1, ops.psi2
    p1d = psi1.conj().T.tocsr()
    sqrt2 = math.sqrt(2.0)
    a1 = ((psi2 + psi1) / sqrt2).tocsr()
    a2 = ((psi2 - psi1) / sqrt2).tocsr()
    num1 = (a1.conj().T @ a1).tocsr()
    num2 = (a2.conj().T @ a2).tocsr()
    n1_c = ops.n1  # psi1^dag psi1
    c12 = (psi1.conj().T @ psi2).tocsr()  # psi1^dag psi2
    c21 = (psi2.conj().T @ psi1).tocsr()
    # constant part of H_eff: dw * psi2^dag psi1 + w0 * psi2^dag psi2
    h_const = (gen.delta_omega * c21 + gen.omega0 * ops.n2).tocsr()
    p1d_t = p1d.T.tocsr()  # for right multiplications

    om11, om21, g1, gc = gen.Omega11, gen.Omega21, gen.gamma1, gen.cross_rate

    dense = rho0.basis.dim <= DENSE_DIM_LIMIT
    if dense:
        psi1_d, psi2_d, p1d_d = psi1.toarray(), psi2.toarray(), p1d.toarray()
        n1_d, c12_d, h_const_d = n1_c.toarray(), c12.toarray(), h_const.toarray()
        a1_t, a2_t = a1.toarray().T.copy(), a2.toarray().T.copy()
        num1_t, num2_t = num1.toarray().T.copy(), num2.toarray().T.copy()

        def rhs(rho: np.ndarray, j: int) -> np.ndarray:
            # For Hermitian stage input the whole generator is S + S^dag with
            # S = (-iH) rho + (K rho) psi1^dag and K = (gamma1 psi1 + gc psi2)/2:
            # the conjugate transpose supplies rho H^dag and the paired
            # psi1 rho psi2^dag jump term.
            a_op = -1j * (om11[j] * n1_d + om21[j] * c12_d + h_const_d)
            k_op = 0.5 * (g1[j] * psi1_d + gc[j] * psi2_d)
            s = a_op @ rho + (k_op @ rho) @ p1d_d
            return s + s.conj().T

        def expect(op_t: np.ndarray, rho: np.ndarray) -> complex:
            return complex(np.sum(op_t * rho))

    else:

        def rhs(rho: np.ndarray, j: int) -> np.ndarray:
            h_rho = om11[j] * (n1_c @ rho) + om21[j] * (c12 @ rho) + h_const @ rho
            out = -1j * (h_rho - h_rho.conj().T)
            out += g1[j] * _right_mul(psi1 @ rho, p1d_t)
            cross = (0.5 * gc[j]) * _right_mul(psi2 @ rho, p1d_t)
            out += cross + cross.conj().T
            return out

        a1_t, a2_t = a1.T.tocsr(), a2.T.tocsr()
        num1_t, num2_t = num1.T.tocsr(), num2.T.tocsr()

        def expect(op_t, rho: np.ndarray) -> complex:
            return complex(op_t.multiply(rho).sum())

    rho = rho0.data.copy()
    rec_t, rec = [], {k: [] for k in ("x1", "x2", "p1", "p2", "n1", "n2", "tr", "me", "ln")}

    def record(step: int) -> None:
        rec_t.append(step * dt_master)
        m_a1 = expect(a1_t, rho)
        m_a2 = expect(a2_t, rho)
        rec["x1"].append(sqrt2 * m_a1.real)
        rec["x2"].append(sqrt2 * m_a2.real)
        rec["p1"].append(sqrt2 * m_a1.imag)
        rec["p2"].append(sqrt2 * m_a2.imag)
        rec["n1"].append(expect(num1_t, rho).real)
        rec["n2"].append(expect(num2_t, rho).real)
        rec["tr"].append(float(np.trace(rho).real))
        rec["me"].append(float(np.linalg.eigvalsh(rho)[0]))
        if compute_logneg:
            rec["ln"].append(log_negativity(DensityMatrix(rho0.basis, rho)))

    h = dt_master
    for step in range(n_master + 1):
        if step % output_stride == 0:
            record(step)
        if step == n_master:
            break
        j = step * ratio
        k1 = rhs(rho, j)
        k2 = rhs(rho + 0.5 * h * k1, j + ratio // 2)
        k3 = rhs(rho + 0.5 * h * k2, j + ratio // 2)
        k4 = rhs(rho + h * k3, j + ratio)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        defect = float(np.max(np.abs(rho - rho.conj().T)))
        if defect > herm_tol:
            raise HermiticityError(
                f"Hermiticity defect {defect:.3e} > {herm_tol:g} at step {step + 1}"
            )
        rho = 0.5 * (rho + rho.conj().T)
        tr = float(np.trace(rho).real)
        if abs(tr - 1.0) > trace_tol:
            raise TraceDriftError(
                f"|Tr rho - 1| = {abs(tr - 1.0):.3e} > {trace_tol:g} "
                f"at t = {(step + 1) * dt_master:g}"
            )

    return EvolutionResult(
        times=np.array(rec_t),
        x1=np.array(rec["x1"]),
        x2=np.array(rec["x2"]),
        p1=np.array(rec["p1"]),
        p2=np.array(rec["p2"]),
        n1=np.array(rec["n1"]),
        n2=np.array(rec["n2"]),
        trace=np.array(rec["tr"]),
        min_eig=np.array(rec["me"]),
        logneg=np.array(rec["ln"]) if compute_logneg else None,
        final=DensityMatrix(rho0.basis, rho),
    )


@lru_cache(maxsize=8)
def _beam_splitter_matrix(n_cap: int) -> np.ndarray:
    """Rows: product basis (m1, m2) with m_j <= n_cap; columns: triangular basis.

    Column (n1, n2) holds the a-mode amplitudes of
    (psi1^dag)^n1 (psi2^dag)^n2 |0> / sqrt(n1! n2!)  with
    psi1^dag = (a1^dag - a2^dag)/sqrt(2), psi2^dag = (a1^dag + a2^dag)/sqrt(2),
    expanded binomially.
    """
    basis = FockBasis(n_cap)
    d_sq = n_cap + 1
    B = np.zeros((d_sq * d_sq, basis.dim))
    for col, (n1, n2) in enumerate(basis.states):
        c_rel = np.array(
            [math.comb(n1, j) * (-1.0) ** (n1 - j) for j in range(n1 + 1)]
        )  # coeff of a1^j a2^(n1-j)
        c_com = np.array([float(math.comb(n2, l)) for l in range(n2 + 1)])
        cx = np.convolve(c_rel, c_com)  # coeff of a1^m1 a2^(N-m1)
        total = n1 + n2
        norm = math.sqrt(2.0**total * math.factorial(n1) * math.factorial(n2))
        for m1, c in enumerate(cx):
            m2 = total - m1
            amp = c * math.sqrt(math.factorial(m1) * math.factorial(m2)) / norm
            B[m1 * d_sq + m2, col] = amp
    return B


def log_negativity(dm: DensityMatrix) -> float:
    """Logarithmic negativity between the two lab oscillators.

    Rotates the state to the a-mode (lab) basis through the 50:50
    beam-splitter matrix, takes the partial transpose over a2 and returns
    log2 of the trace norm.  Warns if the rotated norm deficit exceeds 1e-6.
    """
    n_cap = dm.basis.n_cap
    B = _beam_splitter_matrix(n_cap)
    rho_a = B @ dm.data @ B.conj().T
    deficit = abs(1.0 - float(np.trace(rho_a).real))
    if deficit > 1e-6:
        warnings.warn(
            f"beam-splitter rotation lost {deficit:.3e} of the norm; "
            "state has weight at the excitation cap",
            stacklevel=2,
        )
    d = n_cap + 1
    rho4 = rho_a.reshape(d, d, d, d)
    rho_pt = rho4.transpose(0, 3, 2, 1).reshape(d * d, d * d)
    rho_pt = 0.5 * (rho_pt + rho_pt.conj().T)
    eigs = np.linalg.eigvalsh(rho_pt)
    return float(np.log2(np.sum(np.abs(eigs))))
