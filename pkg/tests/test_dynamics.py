import math

import numpy as np
import pytest

from quasilattice.model import CavitySpec, LatticeSpec
from quasilattice import dynamics, radiation

CAV = CavitySpec(omega_c=6.729, eta=0.1)
# drive frequency on a quasi-period multiple, where the golden-rule rate
# for the discretized continuum coincides with the analytic one
LAT = LatticeSpec(n_qubits=4, relative_spacing=2 / 3, omega_q=3 * 6.729)


class TestBathSpec:
    def test_uniform_grid_centered_on_qubit(self):
        bath = dynamics.normalized_bath(LAT, bandwidth=0.5, n_modes=11)
        assert bath.n_modes == 11
        assert bath.mode_frequencies[5] == pytest.approx(LAT.omega_q)
        assert np.allclose(np.diff(bath.mode_frequencies), bath.spacing)

    def test_rejects_bad_grids(self):
        with pytest.raises(ValueError):
            dynamics.BathSpec(np.array([2.0, 1.0]), np.array([0.1, 0.1]), 1.0)
        with pytest.raises(ValueError):
            dynamics.BathSpec(np.array([1.0, 2.0]), np.array([0.1, -0.1]), 1.0)
        with pytest.raises(ValueError):
            dynamics.BathSpec(np.array([-1.0, 2.0]), np.array([0.1, 0.1]), 3.0)

    def test_rejects_nonpositive_frequencies(self):
        with pytest.raises(ValueError):
            dynamics.normalized_bath(LAT, bandwidth=100.0, n_modes=11)

    def test_physical_couplings_scale(self):
        a = dynamics.physical_bath(LAT, 0.5, 11, mu=1.0, epsilon_d=1.0, volume=1.0)
        b = dynamics.physical_bath(LAT, 0.5, 11, mu=2.0, epsilon_d=1.0, volume=1.0)
        assert np.allclose(b.couplings, 2.0 * a.couplings)


class TestIntegration:
    def test_decoupled_amplitude_is_constant(self):
        bath = dynamics.BathSpec(
            np.linspace(19.0, 21.0, 11), np.zeros(11), 0.2
        )
        traj = dynamics.integrate_amplitudes(LAT, CAV, bath, 2.0, 0.01)
        assert np.max(np.abs(traj.alpha - 1.0)) == 0.0

    def test_single_resonant_mode_rabi(self):
        g = 0.05
        bath = dynamics.BathSpec(np.array([LAT.omega_q]), np.array([g]), 1.0)
        rabi = g * abs(radiation.s_factor(LAT, CAV, LAT.omega_q))
        traj = dynamics.integrate_amplitudes(LAT, CAV, bath, 60.0, 0.01)
        expected = np.cos(rabi * traj.times) ** 2
        assert np.max(np.abs(np.abs(traj.alpha) ** 2 - expected)) < 1e-9

    def test_norm_conservation(self):
        bath = dynamics.normalized_bath(LAT, bandwidth=0.4, n_modes=101)
        traj = dynamics.integrate_amplitudes(LAT, CAV, bath, 60.0, 0.2)
        assert np.max(np.abs(1.0 - traj.norm_history)) < 1e-6 * max(1.0, traj.times[-1])

    def test_step_halving_convergence(self):
        bath = dynamics.normalized_bath(LAT, bandwidth=0.4, n_modes=51)
        a = dynamics.integrate_amplitudes(LAT, CAV, bath, 40.0, 0.2)
        b = dynamics.integrate_amplitudes(LAT, CAV, bath, 40.0, 0.1)
        assert abs(abs(a.alpha[-1]) - abs(b.alpha[-1])) < 1e-7

    def test_coarse_step_rejected(self):
        bath = dynamics.normalized_bath(LAT, bandwidth=10.0, n_modes=51)
        with pytest.raises(dynamics.StepSizeError):
            dynamics.integrate_amplitudes(LAT, CAV, bath, 10.0, 0.1)

    def test_recurrence_guard(self):
        bath = dynamics.normalized_bath(LAT, bandwidth=0.5, n_modes=11)
        horizon = 2.0 * math.pi / bath.spacing + 1.0
        with pytest.raises(dynamics.RecurrenceError):
            dynamics.integrate_amplitudes(LAT, CAV, bath, horizon, 0.2)

    def test_l_resolved_matches_collapsed(self):
        bath = dynamics.normalized_bath(LAT, bandwidth=0.4, n_modes=31)
        a = dynamics.integrate_amplitudes(LAT, CAV, bath, 30.0, 0.2)
        b = dynamics.integrate_amplitudes(LAT, CAV, bath, 30.0, 0.2, l_resolved=True)
        assert np.max(np.abs(a.alpha - b.alpha)) < 1e-12

    def test_initial_condition(self):
        bath = dynamics.normalized_bath(LAT, bandwidth=0.4, n_modes=11)
        traj = dynamics.integrate_amplitudes(LAT, CAV, bath, 5.0, 0.2)
        assert traj.alpha[0] == 1.0
        assert np.all(traj.beta[:, 0] == 0.0)


class TestFitDecay:
    def _synthetic(self, rate: float) -> dynamics.AmplitudeTrajectory:
        t = np.linspace(0.0, 100.0, 501)
        alpha = np.exp(-0.5 * rate * t).astype(complex)
        beta = np.sqrt(np.maximum(0.0, 1.0 - np.abs(alpha) ** 2))[None, :].astype(complex)
        return dynamics.AmplitudeTrajectory(
            times=t, alpha=alpha, beta=beta, norm_history=np.ones_like(t)
        )

    def test_exact_exponential(self):
        traj = self._synthetic(0.05)
        assert dynamics.fit_decay(traj) == pytest.approx(0.05, abs=1e-12)

    def test_rabi_trajectory_rejected(self):
        # horizon covers a full Rabi period, so the window contains a revival
        g = 0.05
        bath = dynamics.BathSpec(np.array([LAT.omega_q]), np.array([g]), 1.0)
        traj = dynamics.integrate_amplitudes(LAT, CAV, bath, 3000.0, 0.5)
        with pytest.raises(dynamics.NonMonotoneWindowError):
            dynamics.fit_decay(traj, window=(0.0, 3000.0))

    def test_window_too_small(self):
        traj = self._synthetic(0.05)
        with pytest.raises(ValueError):
            dynamics.fit_decay(traj, window=(0.0, 0.1))

    def test_markov_regime_matches_analytic(self):
        gamma = radiation.decay_rate(LAT, CAV).gamma_normalized
        bath = dynamics.normalized_bath(LAT, bandwidth=max(60 * gamma, 0.5), n_modes=601)
        recurrence = 2.0 * math.pi / bath.spacing
        t_final = min(3.0 / gamma, 0.8 * recurrence)
        traj = dynamics.integrate_amplitudes(LAT, CAV, bath, t_final, 0.2)
        fitted = dynamics.fit_decay(traj)
        assert 0.9 < fitted / gamma < 1.1
