"""Excitation-number blocks of the dressed qubit-chain + cavity system.

The coupled Hamiltonian conserves the total excitation number u = n + m
(photon number n plus spin projection m), so it splits into finite
tridiagonal blocks.  Each block is diagonalized for the polariton
branches; the closed-form coefficient expansion is kept as a cross-check
of the eigensolver.  Excitation numbers and spin projections can be
half-integers for odd N, so they are carried as doubled integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .model import CavitySpec, LatticeSpec, deformation_factor


class EmptySectorError(ValueError):
    """Requested excitation sector contains no basis states."""


class DegenerateDetuningError(ValueError):
    """Closed-form coefficient denominator eps - j*detuning vanished."""


@dataclass(frozen=True)
class SectorBasis:
    """Ordered basis of one excitation sector.

    two_u: twice the total excitation number u.
    entries: (n, two_m) pairs with m = u - n, sorted by ascending photon
        number n.
    """

    two_u: int
    entries: tuple[tuple[int, int], ...]

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @property
    def photon_numbers(self) -> np.ndarray:
        return np.array([n for n, _ in self.entries])


@dataclass(frozen=True)
class PolaritonSector:
    """Diagonalized excitation sector.

    eigenvalues: branch frequencies Omega (GHz), ascending.
    coefficients: column b holds the expansion of branch b over the
        sector basis, unit norm, gauge-fixed so the photon-vacuum
        coefficient is nonnegative.
    stark_splittings: interaction eigenvalues eps = Omega - u*omega_q.
    """

    basis: SectorBasis
    eigenvalues: np.ndarray
    coefficients: np.ndarray
    stark_splittings: np.ndarray


@dataclass(frozen=True)
class TransitionMatrices:
    """Collective raising/lowering elements between adjacent sectors.

    raise_elements maps (two_u, branch_u, branch_lower) to the raising
    element from sector u-1 into sector u; lower_elements is its
    conjugate map (two_u, branch_u, branch_upper).  Same-sector elements
    vanish identically and are absent.
    """

    raise_elements: dict[tuple[int, int, int], float]
    lower_elements: dict[tuple[int, int, int], float]


def sector_basis(lattice: LatticeSpec, two_u: int) -> SectorBasis:
    """Enumerate (n, m) combinations with n + m = u, sorted by n."""
    two_r = lattice.two_r
    if two_u < -two_r:
        raise EmptySectorError(
            f"sector 2u={two_u} lies below the ground sector 2u={-two_r}"
        )
    if (two_u - two_r) % 2 != 0:
        raise EmptySectorError(
            f"sector 2u={two_u} has the wrong parity for 2r={two_r}"
        )
    # m = u - n must satisfy -r <= m <= r and n >= 0.
    n_lo = max(0, (two_u - two_r) // 2)
    n_hi = (two_u + two_r) // 2
    entries = tuple((n, two_u - 2 * n) for n in range(n_lo, n_hi + 1))
    if not entries:
        raise EmptySectorError(f"sector 2u={two_u} is empty")
    return SectorBasis(two_u=two_u, entries=entries)


def _ladder_couplings(
    lattice: LatticeSpec, cavity: CavitySpec, basis: SectorBasis
) -> np.ndarray:
    """Off-diagonal elements between consecutive basis states (n-1, n)."""
    two_r = lattice.two_r
    f = deformation_factor(lattice)
    out = []
    for n, two_m in basis.entries[1:]:
        # coupling of (n, m) to (n-1, m+1): eta*sqrt(n)*sqrt(f*(r-m)(r+m+1))
        rm = (two_r - two_m) / 2.0
        rm1 = (two_r + two_m) / 2.0 + 1.0
        out.append(cavity.eta * math.sqrt(n) * math.sqrt(f * rm * rm1))
    return np.array(out)


def build_sector_hamiltonian(
    lattice: LatticeSpec, cavity: CavitySpec, two_u: int
) -> np.ndarray:
    """Dense real symmetric block Hamiltonian of one excitation sector, GHz.

    Diagonal entries are the bare energies omega_q*m + omega_c*n; the
    single off-diagonal couples (n, m) to (n-1, m+1) with strength
    eta*sqrt(n)*sqrt(f*(r-m)*(r+m+1)).
    """
    basis = sector_basis(lattice, two_u)
    diag = np.array(
        [lattice.omega_q * two_m / 2.0 + cavity.omega_c * n for n, two_m in basis.entries]
    )
    h = np.diag(diag)
    off = _ladder_couplings(lattice, cavity, basis)
    idx = np.arange(len(off))
    h[idx, idx + 1] = off
    h[idx + 1, idx] = off
    return h


def diagonalize_sector(
    lattice: LatticeSpec, cavity: CavitySpec, two_u: int
) -> PolaritonSector:
    """Polariton branches of one sector, eigenvalues ascending.

    Coefficient columns carry the gauge c_0 >= 0 (first nonzero entry
    nonnegative for decoupled cases where c_0 = 0).
    """
    basis = sector_basis(lattice, two_u)
    diag = np.array(
        [lattice.omega_q * two_m / 2.0 + cavity.omega_c * n for n, two_m in basis.entries]
    )
    off = _ladder_couplings(lattice, cavity, basis)
    if basis.dimension == 1:
        vals, vecs = diag.copy(), np.ones((1, 1))
    else:
        try:
            vals, vecs = eigh_tridiagonal(diag, off)
        except Exception as exc:  # pragma: no cover - LAPACK failure
            raise RuntimeError(f"sector 2u={two_u} eigensolver failed: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise RuntimeError(f"sector 2u={two_u} produced non-finite eigenvalues")
    order = np.argsort(vals)
    vals = vals[order]
    vecs = vecs[:, order]
    for b in range(vecs.shape[1]):
        col = vecs[:, b]
        lead = col[np.nonzero(np.abs(col) > 1e-14)[0][0]]
        if lead < 0:
            vecs[:, b] = -col
    eps = vals - lattice.omega_q * two_u / 2.0
    return PolaritonSector(
        basis=basis, eigenvalues=vals, coefficients=vecs, stark_splittings=eps
    )


def _descending_index_sets(n_top: int, q: int):
    """Index tuples j_1 > ... > j_q in {0..n_top} with pairwise gaps >= 2."""
    for comb in combinations(range(n_top + 1), q):
        desc = comb[::-1]
        if all(desc[i] - desc[i + 1] >= 2 for i in range(q - 1)):
            yield desc


def closed_form_coefficients(
    lattice: LatticeSpec,
    cavity: CavitySpec,
    two_u: int,
    eps: float,
) -> np.ndarray:
    """Branch coefficients from the recursive product/multi-sum expansion.

    eps is the interaction eigenvalue of the chosen branch (from
    ``diagonalize_sector``).  The expansion is evaluated term by term and
    normalized; it must agree with the eigensolver column.  Odd photon
    numbers truncate the lattice-excitation sum at floor(n/2).
    """
    basis = sector_basis(lattice, two_u)
    two_r = lattice.two_r
    if two_u > two_r:
        raise ValueError(
            "closed-form expansion only covers sectors with u <= r; use "
            "diagonalize_sector for higher sectors"
        )
    r = two_r / 2.0
    u = two_u / 2.0
    f = deformation_factor(lattice)
    dw = cavity.detuning(lattice)
    eta = cavity.eta

    if basis.dimension == 1:
        return np.ones(1)
    if eta == 0.0:
        # Decoupled limit: the branch is a bare basis state picked by eps.
        diag = np.array([dw * n for n, _ in basis.entries])
        col = np.zeros(basis.dimension)
        col[int(np.argmin(np.abs(diag - eps)))] = 1.0
        return col

    coeffs = np.empty(basis.dimension)
    n0 = basis.entries[0][0]
    for row, (n_abs, _) in enumerate(basis.entries):
        n = n_abs - n0  # steps above the sector's lowest photon number
        for j in range(1, n + 1):
            if abs(eps - j * dw) < 1e-12 * max(1.0, abs(eps)):
                raise DegenerateDetuningError(
                    f"eps - {j}*detuning vanishes for sector 2u={two_u}"
                )
        prefactor = 1.0
        for j in range(n):
            prefactor *= (eps - j * dw) / eta
        falling = math.prod(r + u - i for i in range(n))
        rising = math.prod(r - u + 1.0 + i for i in range(n))
        prefactor /= math.sqrt(math.factorial(n) * falling * rising)
        total = 0.0
        for q in range(n // 2 + 1):
            part = 0.0
            for desc in _descending_index_sets(n - 2, q):
                term = 1.0
                for jk in desc:
                    term *= (
                        -(eta**2)
                        * (jk + 1)
                        * (r + u - jk)
                        / (eps - jk * dw)
                        * (r - u + jk + 1)
                        / (eps - (jk + 1) * dw)
                    )
                part += term
            total += f ** (q - n / 2.0) * part
        coeffs[row] = prefactor * total
    coeffs /= np.linalg.norm(coeffs)
    lead = coeffs[np.nonzero(np.abs(coeffs) > 1e-14)[0][0]]
    if lead < 0:
        coeffs = -coeffs
    return coeffs


def raising_element(
    lattice: LatticeSpec,
    upper: PolaritonSector,
    lower: PolaritonSector,
    branch_upper: int,
    branch_lower: int,
) -> float:
    """Collective raising element from a branch of sector u-1 into u."""
    if upper.basis.two_u != lower.basis.two_u + 2:
        raise ValueError("raising element requires adjacent sectors u and u-1")
    two_r = lattice.two_r
    f = deformation_factor(lattice)
    u = upper.basis.two_u / 2.0
    r = two_r / 2.0
    lower_by_n = {n: i for i, (n, _) in enumerate(lower.basis.entries)}
    total = 0.0
    for i, (n, _) in enumerate(upper.basis.entries):
        j = lower_by_n.get(n)
        if j is None:
            continue
        amp = math.sqrt(f * (r + u - n) * (r - u + n + 1))
        total += upper.coefficients[i, branch_upper] * lower.coefficients[j, branch_lower] * amp
    return total


def transition_matrices(
    lattice: LatticeSpec, cavity: CavitySpec, two_u_max: int | None = None
) -> TransitionMatrices:
    """Raising/lowering elements for all sectors up to u_max.

    By default covers the five lowest sectors (u_max = -r + 4).  Lowering
    elements are populated from the raising ones by conjugate symmetry.
    """
    two_r = lattice.two_r
    if two_u_max is None:
        two_u_max = -two_r + 8
    sectors = {
        two_u: diagonalize_sector(lattice, cavity, two_u)
        for two_u in range(-two_r, two_u_max + 1, 2)
    }
    raise_elements: dict[tuple[int, int, int], float] = {}
    lower_elements: dict[tuple[int, int, int], float] = {}
    for two_u in range(-two_r + 2, two_u_max + 1, 2):
        upper = sectors[two_u]
        lower = sectors[two_u - 2]
        for b_up in range(upper.basis.dimension):
            for b_lo in range(lower.basis.dimension):
                el = raising_element(lattice, upper, lower, b_up, b_lo)
                raise_elements[(two_u, b_up, b_lo)] = el
                lower_elements[(two_u - 2, b_lo, b_up)] = el
    return TransitionMatrices(raise_elements=raise_elements, lower_elements=lower_elements)


def first_excited_transition(
    lattice: LatticeSpec, cavity: CavitySpec, branch: int = 0
) -> float:
    """Raising element between the ground sector and the chosen branch of
    the first excited sector (the default radiating transition)."""
    two_r = lattice.two_r
    upper = diagonalize_sector(lattice, cavity, -two_r + 2)
    lower = diagonalize_sector(lattice, cavity, -two_r)
    if not 0 <= branch < upper.basis.dimension:
        raise ValueError(
            f"branch {branch} outside first excited sector of dimension "
            f"{upper.basis.dimension}"
        )
    return raising_element(lattice, upper, lower, branch, 0)
