"""
Tests for the moment-dynamics / Fock-oracle comparison
"""
import numpy as np
import pytest

from app.exceptions import CutoffError
from app.models.state import GaussianMomentState
from app.models.system import LinearOpenSystem
from app.services.cross_validation import ORACLE_INTEGRATOR_NAME, CrossValidator, run_oracle_comparison
from app.services.moment_dynamics import vacuum_state
from tests.conftest import damping_row

COHERENT = GaussianMomentState(mean=[np.sqrt(2.0) * 0.5, 0.0], covariance=0.5 * np.eye(2))


class TestCrossValidator:
    """Test cases for CrossValidator"""

    def test_single_channel_agreement(self, damped_system):
        """Test one damping channel from a coherent start agrees within 1e-3"""
        report = CrossValidator(damped_system, cutoff=20).run(COHERENT, t_final=5.0, dt=1e-3, sample_every=50)

        assert report.shared_samples == 101
        assert report.max_mean_deviation <= 1e-3
        assert report.max_covariance_deviation <= 1e-3
        assert report.max_tail_population <= 1e-8
        assert report.min_physicality_eigenvalue >= -1e-9
        assert report.max_third_moment <= 1e-8

    def test_two_channel_agreement(self, two_channel_system):
        """Test two damping channels agree within 1e-3"""
        report = run_oracle_comparison(two_channel_system, COHERENT, cutoff=20, t_final=5.0, dt=1e-3, sample_every=50)
        assert report.max_deviation <= 1e-3
        assert report.max_tail_population <= 1e-8
        assert report.min_physicality_eigenvalue >= -1e-9

    def test_squeezed_start(self, damped_system):
        """Test a squeezed thermal start, prepared from its moments, agrees"""
        initial = GaussianMomentState(mean=[0.2, -0.1], covariance=[[0.9, 0.2], [0.2, 0.5]])
        report = CrossValidator(damped_system, cutoff=30).run(initial, t_final=3.0, dt=1e-3, sample_every=100)
        assert report.max_deviation <= 1e-3

    def test_two_mode_agreement(self):
        """Test a lossy beam-splitter pair agrees mode by mode"""
        hamiltonian = np.array([
            [1.0, 0.2, 0.0, 0.0],
            [0.2, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.2],
            [0.0, 0.0, 0.2, 1.0],
        ])
        system = LinearOpenSystem(n_modes=2, hamiltonian=hamiltonian, coupling=[damping_row(0.5, 0, 2)])
        initial = GaussianMomentState(mean=[np.sqrt(2.0) * 0.3, 0.0, 0.0, 0.0], covariance=0.5 * np.eye(4))
        report = CrossValidator(system, cutoff=10).run(initial, t_final=2.0, dt=1e-3, sample_every=200)
        assert report.max_deviation <= 1e-3
        assert report.oracle_trajectory.metadata.n_modes == 2

    def test_report_trajectories(self, damped_system):
        """Test both trajectories share the sample times"""
        report = CrossValidator(damped_system, cutoff=12).run(vacuum_state(1), t_final=1.0, dt=0.1, sample_every=5)
        np.testing.assert_allclose(report.moment_trajectory.times, [0.0, 0.5, 1.0])
        np.testing.assert_array_equal(report.moment_trajectory.times, report.oracle_trajectory.times)
        assert report.oracle_trajectory.metadata.integrator == ORACLE_INTEGRATOR_NAME
        assert report.oracle_trajectory.metadata.system_fingerprint == damped_system.fingerprint()
        assert report.purity_gaussian == pytest.approx(1.0, abs=1e-12)
        assert report.purity_exact == pytest.approx(1.0, abs=1e-12)

    def test_inadequate_cutoff(self, damped_system):
        """Test a hot thermal state at cutoff 4 aborts with CutoffError"""
        hot = GaussianMomentState(mean=[0.0, 0.0], covariance=5.0 * np.eye(2))
        with pytest.raises(CutoffError) as excinfo:
            CrossValidator(damped_system, cutoff=4).run(hot, t_final=1.0, dt=0.1)
        assert excinfo.value.cutoff == 4
        assert excinfo.value.tail_population > 1e-8
        assert "increase --cutoff" in str(excinfo.value)
