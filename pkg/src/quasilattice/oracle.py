"""Brute-force exact numerics in the full qubit-chain x Fock product
space.

Everything here is built from dense Kronecker products at small N and
serves as an independent check on the deformed collective-spin model:
commutation relations, Dicke-state structure, excitation conservation,
and exact sector spectra.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import CavitySpec, LatticeSpec, coupling_weights, deformation_factor

_MAX_QUBITS = 8
_MAX_FOCK = 12


class DimensionGuardError(ValueError):
    """Requested product space exceeds the supported dense size."""


class TruncationError(ValueError):
    """Requested sector reaches the Fock cutoff; spectrum would be wrong."""


@dataclass(frozen=True)
class ProductSpaceOperators:
    """Dense operators on the 2^N x (n_max+1) product space.

    S_plus/S_minus carry the site weights cos(j*pi*ell); Sigma_z is the
    cos^2-weighted inversion entering their commutator.  H_total is the
    full chain + cavity + coupling Hamiltonian in GHz.
    """

    lattice: LatticeSpec
    cavity: CavitySpec
    n_max: int
    S_z: np.ndarray
    S_plus: np.ndarray
    S_minus: np.ndarray
    Sigma_z: np.ndarray
    a: np.ndarray
    a_dagger: np.ndarray
    H_total: np.ndarray

    @property
    def dimension(self) -> int:
        return self.H_total.shape[0]


@dataclass(frozen=True)
class CommutatorReport:
    """Max-abs residuals of the collective-spin commutation identities."""

    sz_splus: float
    sz_sminus: float
    splus_sminus_sigma: float
    splus_sminus_sz: float | None
    tolerance: float

    @property
    def passed(self) -> bool:
        checks = [self.sz_splus, self.sz_sminus, self.splus_sminus_sigma]
        if self.splus_sminus_sz is not None:
            checks.append(self.splus_sminus_sz)
        return all(c < self.tolerance for c in checks)


def _site_operator(op: np.ndarray, site: int, n_qubits: int) -> np.ndarray:
    """Embed a single-qubit operator at one site of the chain."""
    mat = np.array([[1.0]])
    for j in range(n_qubits):
        mat = np.kron(mat, op if j == site else np.eye(2))
    return mat


_SIGMA_Z = np.diag([0.5, -0.5])
_SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]])


def build_operators(
    lattice: LatticeSpec, cavity: CavitySpec, n_max: int
) -> ProductSpaceOperators:
    """Kronecker-product construction of the collective operators and
    H_total = omega_q*S_z + omega_c*a_dag*a + eta*(S_plus*a + S_minus*a_dag).
    """
    n = lattice.n_qubits
    if n > _MAX_QUBITS or n_max > _MAX_FOCK:
        raise DimensionGuardError(
            f"dense oracle limited to N <= {_MAX_QUBITS}, n_max <= {_MAX_FOCK}"
        )
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    weights = coupling_weights(lattice).coupling_weights
    dim_spin = 2**n

    s_z = np.zeros((dim_spin, dim_spin))
    s_plus = np.zeros((dim_spin, dim_spin))
    sigma_z = np.zeros((dim_spin, dim_spin))
    for j in range(n):
        s_z += _site_operator(_SIGMA_Z, j, n)
        s_plus += weights[j] * _site_operator(_SIGMA_PLUS, j, n)
        sigma_z += weights[j] ** 2 * _site_operator(_SIGMA_Z, j, n)
    s_minus = s_plus.conj().T

    dim_fock = n_max + 1
    a = np.diag(np.sqrt(np.arange(1, dim_fock)), 1)
    a_dag = a.conj().T

    eye_f = np.eye(dim_fock)
    eye_s = np.eye(dim_spin)
    S_z = np.kron(s_z, eye_f)
    S_plus = np.kron(s_plus, eye_f)
    S_minus = np.kron(s_minus, eye_f)
    Sigma_z = np.kron(sigma_z, eye_f)
    A = np.kron(eye_s, a)
    A_dag = np.kron(eye_s, a_dag)
    H = (
        lattice.omega_q * S_z
        + cavity.omega_c * (A_dag @ A)
        + cavity.eta * (S_plus @ A + S_minus @ A_dag)
    )
    return ProductSpaceOperators(
        lattice=lattice,
        cavity=cavity,
        n_max=n_max,
        S_z=S_z,
        S_plus=S_plus,
        S_minus=S_minus,
        Sigma_z=Sigma_z,
        a=A,
        a_dagger=A_dag,
        H_total=H,
    )


def verify_commutators(ops: ProductSpaceOperators, tol: float = 1e-12) -> CommutatorReport:
    """Residuals of [S_z, S_pm] = pm S_pm and [S_plus, S_minus] = 2*Sigma_z;
    at ell = 0 additionally [S_plus, S_minus] = 2*S_z."""

    def comm(x, y):
        return x @ y - y @ x

    r1 = float(np.max(np.abs(comm(ops.S_z, ops.S_plus) - ops.S_plus)))
    r2 = float(np.max(np.abs(comm(ops.S_z, ops.S_minus) + ops.S_minus)))
    r3 = float(np.max(np.abs(comm(ops.S_plus, ops.S_minus) - 2.0 * ops.Sigma_z)))
    r4 = None
    if ops.lattice.relative_spacing == 0.0:
        r4 = float(np.max(np.abs(comm(ops.S_plus, ops.S_minus) - 2.0 * ops.S_z)))
    return CommutatorReport(
        sz_splus=r1, sz_sminus=r2, splus_sminus_sigma=r3, splus_sminus_sz=r4, tolerance=tol
    )


def excitation_conservation_residual(ops: ProductSpaceOperators) -> float:
    """Max-abs norm of [H_total, S_z + a_dag*a]."""
    number = ops.S_z + ops.a_dagger @ ops.a
    comm = ops.H_total @ number - number @ ops.H_total
    return float(np.max(np.abs(comm)))


def dicke_basis(n_qubits: int) -> dict[int, np.ndarray]:
    """Fully symmetric spin states keyed by twice the projection 2m.

    Each vector lives in the 2^N qubit space with equal amplitude
    1/sqrt(C(N, n_up)) on every configuration of n_up excited sites,
    i.e. the normalized permutation sum.
    """
    states: dict[int, np.ndarray] = {}
    for n_up in range(n_qubits + 1):
        vec = np.zeros(2**n_qubits)
        amp = 1.0 / math.sqrt(math.comb(n_qubits, n_up))
        for sites in itertools.combinations(range(n_qubits), n_up):
            idx = 0
            for j in range(n_qubits):
                idx = 2 * idx + (0 if j in sites else 1)
            vec[idx] = amp
        states[2 * n_up - n_qubits] = vec
    return states


def dicke_diagonal_elements(ops: ProductSpaceOperators) -> np.ndarray:
    """Diagonal matrix elements <r,m|S_plus|r,m> in the qubit space."""
    n = ops.lattice.n_qubits
    weights = coupling_weights(ops.lattice).coupling_weights
    s_plus_spin = np.zeros((2**n, 2**n))
    for j in range(n):
        s_plus_spin += weights[j] * _site_operator(_SIGMA_PLUS, j, n)
    basis = dicke_basis(n)
    return np.array([v @ s_plus_spin @ v for _, v in sorted(basis.items())])


def sector_indices(ops: ProductSpaceOperators, two_u: int) -> np.ndarray:
    """Product-basis indices with total excitation number u.

    The conserved operator S_z + a_dag*a is diagonal in the product
    basis; its eigenvalue on each basis state selects the sector.
    """
    number = np.diag(ops.S_z + ops.a_dagger @ ops.a)
    return np.nonzero(np.abs(2.0 * number - two_u) < 1e-9)[0]


def exact_sector_spectrum(ops: ProductSpaceOperators, two_u: int) -> np.ndarray:
    """Eigenvalues of H_total restricted to the excitation-u eigenspace.

    Refuses sectors whose basis states reach the Fock cutoff, where the
    truncated ladder would corrupt the spectrum.
    """
    residual = excitation_conservation_residual(ops)
    if residual > 1e-12:
        raise RuntimeError(
            f"H_total does not conserve the excitation number (residual {residual:.3e})"
        )
    idx = sector_indices(ops, two_u)
    if idx.size == 0:
        raise ValueError(f"sector 2u={two_u} is empty in the product space")
    dim_fock = ops.n_max + 1
    photon = idx % dim_fock
    if np.any(photon >= ops.n_max):
        raise TruncationError(
            f"sector 2u={two_u} touches the Fock cutoff n_max={ops.n_max}"
        )
    block = ops.H_total[np.ix_(idx, idx)]
    return np.linalg.eigvalsh(block)


def deformation_factor_bridge(ops: ProductSpaceOperators) -> tuple[float, float]:
    """Mean-square site weight from the exact Sigma_z, paired with the
    model's deformation factor for comparison."""
    weights = coupling_weights(ops.lattice).coupling_weights
    exact = float(np.mean(weights**2))
    return exact, deformation_factor(ops.lattice)
