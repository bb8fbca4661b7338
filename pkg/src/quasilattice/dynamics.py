"""Time-domain decay of the lowest excited polariton into a discretized
waveguide continuum.

The coupled amplitude equations are integrated in the interaction
picture with the oscillating phases kept explicit, so the exponential
(Markov) decay law is an output to be checked against the analytic rate,
not an assumption of the scheme.  Times are in ns, frequencies in GHz,
with 2*pi absorbed into the angular-frequency convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import CavitySpec, LatticeSpec
from .polariton import first_excited_transition
from .radiation import chi, l_values, s_factor


class StepSizeError(ValueError):
    """Time step too coarse for the largest bath detuning."""


class RecurrenceError(ValueError):
    """Requested horizon exceeds the discretized bath's recurrence time."""


class NonMonotoneWindowError(RuntimeError):
    """Decay-fit window contains revivals; no exponential fit is made."""


@dataclass(frozen=True)
class BathSpec:
    """Discretized radiation continuum.

    mode_frequencies: strictly increasing grid of omega_k, GHz.
    couplings: per-mode amplitudes g_k, GHz, already scaled by the
        continuum measure sqrt(spacing/2pi-type factor).
    spacing: grid spacing used for the density normalization.
    """

    mode_frequencies: np.ndarray
    couplings: np.ndarray
    spacing: float

    def __post_init__(self) -> None:
        w = np.asarray(self.mode_frequencies, dtype=float)
        g = np.asarray(self.couplings, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("mode_frequencies must be a nonempty vector")
        if np.any(np.diff(w) <= 0):
            raise ValueError("mode_frequencies must be strictly increasing")
        if np.any(w <= 0):
            raise ValueError("mode frequencies must be positive")
        if g.shape != w.shape:
            raise ValueError("couplings must match mode_frequencies in shape")
        if np.any(g < 0):
            raise ValueError("couplings must be nonnegative")
        object.__setattr__(self, "mode_frequencies", w)
        object.__setattr__(self, "couplings", g)

    @property
    def n_modes(self) -> int:
        return self.mode_frequencies.size


@dataclass(frozen=True)
class AmplitudeTrajectory:
    """Time series of the polariton amplitude alpha and mode amplitudes
    beta_k, with the running norm |alpha|^2 + sum_k |beta_k|^2."""

    times: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    norm_history: np.ndarray


def normalized_bath(
    lattice: LatticeSpec,
    bandwidth: float,
    n_modes: int,
) -> BathSpec:
    """Uniform bath over [omega_q - B/2, omega_q + B/2] with the
    normalized coupling profile g_k^2 = spacing * k_q / (2 pi omega_k).

    With this measure the golden-rule rate for |alpha|^2 equals
    |s(k_q)|^2, matching the normalized analytic decay rate.
    """
    if bandwidth <= 0 or n_modes < 1:
        raise ValueError("bandwidth must be positive and n_modes >= 1")
    w_q = lattice.omega_q
    if n_modes == 1:
        freqs = np.array([w_q])
        spacing = bandwidth
    else:
        freqs = np.linspace(w_q - bandwidth / 2.0, w_q + bandwidth / 2.0, n_modes)
        spacing = freqs[1] - freqs[0]
    if freqs[0] <= 0:
        raise ValueError("bath extends to nonpositive frequencies; shrink bandwidth")
    g = np.sqrt(spacing * lattice.k_q / (2.0 * math.pi * freqs))
    return BathSpec(mode_frequencies=freqs, couplings=g, spacing=spacing)


def physical_bath(
    lattice: LatticeSpec,
    bandwidth: float,
    n_modes: int,
    mu: float,
    epsilon_d: float,
    volume: float,
    speed: float = 1.0,
) -> BathSpec:
    """Bath with dimensional couplings g_k^2 = c k_q^2 mu^2/(2 eps_d k V),
    scaled by the grid spacing for the continuum measure."""
    base = normalized_bath(lattice, bandwidth, n_modes)
    w = base.mode_frequencies
    g = np.sqrt(
        base.spacing * speed * lattice.k_q**2 * mu**2 / (2.0 * epsilon_d * w * volume)
    )
    return BathSpec(mode_frequencies=w, couplings=g, spacing=base.spacing)


def integrate_amplitudes(
    lattice: LatticeSpec,
    cavity: CavitySpec,
    bath: BathSpec,
    t_final: float,
    dt: float,
    branch: int = 0,
    l_resolved: bool = False,
) -> AmplitudeTrajectory:
    """Fixed-step fourth-order Runge-Kutta integration of

        d(alpha)/dt = -i sum_k g_k s(k) beta_k exp(-i(omega_q-omega_k)t)
        d(beta_k)/dt = -i g_k s*(k) alpha exp(+i(omega_q-omega_k)t)

    from alpha(0)=1, beta(0)=0.  With l_resolved the per-mode weight is
    accumulated as an explicit sum over the collective indices l instead
    of the precomputed collapsed factor; both give identical dynamics
    because the transition element is l-uniform.
    """
    if t_final <= 0 or dt <= 0:
        raise ValueError("t_final and dt must be positive")
    detunings = lattice.omega_q - bath.mode_frequencies
    max_det = float(np.max(np.abs(detunings))) if detunings.size else 0.0
    if dt * max_det >= 0.1:
        raise StepSizeError(
            f"dt*max|omega_q-omega_k| = {dt * max_det:.3g} must stay below 0.1"
        )
    if bath.n_modes > 1:
        recurrence = 2.0 * math.pi / bath.spacing
        if t_final >= recurrence:
            raise RecurrenceError(
                f"t_final {t_final:g} ns exceeds bath recurrence {recurrence:.3g} ns"
            )

    if l_resolved:
        element = first_excited_transition(lattice, cavity, branch)
        s_k = np.zeros(bath.n_modes, dtype=complex)
        for l in l_values(lattice):
            s_k += chi(lattice, cavity, l, bath.mode_frequencies)
        s_k *= element / lattice.n_qubits
    else:
        s_k = np.atleast_1d(
            s_factor(lattice, cavity, bath.mode_frequencies, branch)
        ).astype(complex)
    g_s = bath.couplings * s_k  # enters d(alpha)/dt
    g_s_conj = bath.couplings * np.conj(s_k)  # enters d(beta)/dt

    n_steps = int(math.ceil(t_final / dt - 1e-12))
    times = np.arange(n_steps + 1) * dt
    alpha_hist = np.empty(n_steps + 1, dtype=complex)
    beta_hist = np.empty((bath.n_modes, n_steps + 1), dtype=complex)
    norm_hist = np.empty(n_steps + 1)

    alpha = 1.0 + 0.0j
    beta = np.zeros(bath.n_modes, dtype=complex)
    alpha_hist[0] = alpha
    beta_hist[:, 0] = beta
    norm_hist[0] = 1.0

    def deriv(t, a, b):
        phase = np.exp(-1j * detunings * t)
        da = -1j * np.sum(g_s * b * phase)
        db = -1j * g_s_conj * a * np.conj(phase)
        return da, db

    for step in range(n_steps):
        t = times[step]
        da1, db1 = deriv(t, alpha, beta)
        da2, db2 = deriv(t + dt / 2, alpha + dt / 2 * da1, beta + dt / 2 * db1)
        da3, db3 = deriv(t + dt / 2, alpha + dt / 2 * da2, beta + dt / 2 * db2)
        da4, db4 = deriv(t + dt, alpha + dt * da3, beta + dt * db3)
        alpha = alpha + dt / 6 * (da1 + 2 * da2 + 2 * da3 + da4)
        beta = beta + dt / 6 * (db1 + 2 * db2 + 2 * db3 + db4)
        if not (np.isfinite(alpha.real) and np.isfinite(alpha.imag)):
            raise RuntimeError(f"non-finite amplitude at t={t + dt:g} ns")
        alpha_hist[step + 1] = alpha
        beta_hist[:, step + 1] = beta
        norm_hist[step + 1] = abs(alpha) ** 2 + float(np.sum(np.abs(beta) ** 2))

    return AmplitudeTrajectory(
        times=times, alpha=alpha_hist, beta=beta_hist, norm_history=norm_hist
    )


def fit_decay(
    traj: AmplitudeTrajectory,
    window: tuple[float, float] | None = None,
    monotone_tol: float = 1e-9,
) -> float:
    """Exponential decay rate from a least-squares fit of ln|alpha(t)|^2.

    window is a (t_start, t_end) pair in ns; by default the first 10% of
    the trajectory is excluded as transient.  Revivals inside the window
    (any rise of |alpha| beyond monotone_tol) abort the fit.
    """
    t = traj.times
    if window is None:
        window = (t[0] + 0.1 * (t[-1] - t[0]), t[-1])
    lo, hi = window
    mask = (t >= lo) & (t <= hi)
    if np.count_nonzero(mask) < 3:
        raise ValueError("fit window contains fewer than 3 samples")
    a2 = np.abs(traj.alpha[mask]) ** 2
    if np.any(a2 <= 0):
        raise ValueError("amplitude vanished inside the fit window")
    rises = np.diff(np.abs(traj.alpha[mask]))
    if np.any(rises > monotone_tol):
        raise NonMonotoneWindowError(
            f"|alpha| rises by up to {np.max(rises):.3g} inside the fit window"
        )
    slope = np.polyfit(t[mask], np.log(a2), 1)[0]
    return -slope
