"""Truncated two-mode Fock space for the relative/COM pair.

States |n1, n2> are kept for n1 + n2 <= n_cap and ordered by total
excitation, then by n1, so the dimension is (n_cap+1)(n_cap+2)/2.
Operators are sparse; density matrices dense.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import sparse

TRUNCATION_TOL = 1e-8


class TruncationError(ValueError):
    """State leaks too much weight past the excitation cap."""


@dataclass(frozen=True)
class FockBasis:
    """Two-mode basis with total excitation n1 + n2 <= n_cap."""

    n_cap: int

    def __post_init__(self) -> None:
        if self.n_cap < 1:
            raise ValueError(f"n_cap must be >= 1, got {self.n_cap}")

    @property
    def dim(self) -> int:
        return (self.n_cap + 1) * (self.n_cap + 2) // 2

    @property
    def states(self) -> tuple[tuple[int, int], ...]:
        return _states(self.n_cap)

    def index(self, n1: int, n2: int) -> int:
        return _index_map(self.n_cap)[(n1, n2)]


@lru_cache(maxsize=None)
def _states(n_cap: int) -> tuple[tuple[int, int], ...]:
    return tuple((n1, total - n1) for total in range(n_cap + 1) for n1 in range(total + 1))


@lru_cache(maxsize=None)
def _index_map(n_cap: int) -> dict[tuple[int, int], int]:
    return {st: k for k, st in enumerate(_states(n_cap))}


@dataclass(frozen=True)
class Operators:
    """Annihilation and number operators on the truncated space (CSR)."""

    basis: FockBasis
    psi1: sparse.csr_matrix
    psi2: sparse.csr_matrix
    n1: sparse.csr_matrix
    n2: sparse.csr_matrix


def build_operators(basis: FockBasis) -> Operators:
    """Sparse psi1, psi2 and number operators.

    [psi_j, psi_j^dag] = 1 holds exactly on the subspace with total
    excitation < n_cap; the top sector absorbs the truncation.
    """
    dim = basis.dim
    states = basis.states
    ix = _index_map(basis.n_cap)
    rows1, cols1, vals1 = [], [], []
    rows2, cols2, vals2 = [], [], []
    for k, (n1, n2) in enumerate(states):
        if n1 > 0:
            rows1.append(ix[(n1 - 1, n2)])
            cols1.append(k)
            vals1.append(math.sqrt(n1))
        if n2 > 0:
            rows2.append(ix[(n1, n2 - 1)])
            cols2.append(k)
            vals2.append(math.sqrt(n2))
    psi1 = sparse.csr_matrix((vals1, (rows1, cols1)), shape=(dim, dim), dtype=complex)
    psi2 = sparse.csr_matrix((vals2, (rows2, cols2)), shape=(dim, dim), dtype=complex)
    num1 = (psi1.conj().T @ psi1).tocsr()
    num2 = (psi2.conj().T @ psi2).tocsr()
    return Operators(basis, psi1, psi2, num1, num2)


@dataclass
class DensityMatrix:
    """Dense density matrix over a FockBasis."""

    basis: FockBasis
    data: np.ndarray

    def __post_init__(self) -> None:
        d = self.basis.dim
        if self.data.shape != (d, d):
            raise ValueError(f"density matrix shape {self.data.shape} != ({d}, {d})")

    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def herm_defect(self) -> float:
        return float(np.max(np.abs(self.data - self.data.conj().T)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.data + self.data.conj().T))[0])


def coherent_state(basis: FockBasis, phi1: complex, phi2: complex) -> DensityMatrix:
    """Two-mode coherent state |phi1, phi2><phi1, phi2| on the truncated basis.

    Raises TruncationError if the weight lost past n_cap exceeds 1e-8;
    otherwise the truncated vector is renormalized.
    """
    amps = np.empty(basis.dim, dtype=complex)
    for k, (n1, n2) in enumerate(basis.states):
        amps[k] = (
            phi1**n1
            * phi2**n2
            / math.sqrt(math.factorial(n1) * math.factorial(n2))
        )
    amps *= math.exp(-0.5 * (abs(phi1) ** 2 + abs(phi2) ** 2))
    deficit = 1.0 - float(np.vdot(amps, amps).real)
    if deficit > TRUNCATION_TOL:
        raise TruncationError(
            f"coherent state loses {deficit:.3e} norm at n_cap = {basis.n_cap}; "
            "raise the cap or shrink the amplitudes"
        )
    amps /= np.linalg.norm(amps)
    return DensityMatrix(basis, np.outer(amps, amps.conj()))


def expectation(dm: DensityMatrix, op) -> complex:
    """Tr(rho * op) for a dense or sparse operator of matching dimension."""
    d = dm.basis.dim
    if op.shape != (d, d):
        raise ValueError(f"operator shape {op.shape} incompatible with basis dim {d}")
    if sparse.issparse(op):
        # Tr(rho A) = sum_ij rho_ij A_ji
        return complex(op.T.multiply(dm.data).sum())
    return complex(np.einsum("ij,ji->", dm.data, op))
