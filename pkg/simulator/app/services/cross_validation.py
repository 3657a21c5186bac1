"""Cross-validation service - runs moment dynamics and the Fock oracle side by side"""
from typing import List, Optional

import numpy as np
from loguru import logger

from app.config import tolerances
from app.exceptions import CutoffError
from app.models.fock import DensityMatrix, FockRig
from app.models.report import OracleReport
from app.models.state import GaussianMomentState, Trajectory, TrajectoryMetadata
from app.models.system import LinearOpenSystem
from app.services import fock_oracle, moment_dynamics
from app.services.core_model import build_drift_diffusion, symplectic_form
from app.utils.linalg import max_abs

ORACLE_INTEGRATOR_NAME = "rk4-master"


class CrossValidator:
    """Checks moment trajectories against moments extracted from the density matrix"""

    def __init__(
        self,
        system: LinearOpenSystem,
        cutoff: int,
        tail_levels: Optional[int] = None,
        tail_tol: Optional[float] = None,
    ):
        self.system = system
        self.cutoff = cutoff
        self.tail_levels = tolerances.TAIL_LEVELS if tail_levels is None else tail_levels
        self.tail_tol = tolerances.TAIL_POPULATION_TOL if tail_tol is None else tail_tol
        self.drift_diffusion = build_drift_diffusion(system)
        self.rig: FockRig = fock_oracle.build_rig(system, cutoff)

    def run(
        self,
        initial: GaussianMomentState,
        t_final: float,
        dt: float,
        sample_every: int = 1,
        rho0: Optional[DensityMatrix] = None,
    ) -> OracleReport:
        """
        Integrate both engines on the same grid and compare every shared sample

        Args:
            initial: Gaussian initial state for moment dynamics
            t_final: End time
            dt: Step size used by both integrators
            sample_every: Sampling stride on the step grid
            rho0: Initial density matrix; built from `initial` when omitted

        Raises:
            CutoffError: If the tail population exceeds tail_tol at any sample
        """
        try:
            logger.info(f"Starting oracle comparison (cutoff={self.cutoff}, t_final={t_final:g}, dt={dt:g})")

            if rho0 is None:
                rho0 = fock_oracle.gaussian_density(self.rig, initial)
            initial_tail = self._check_tail(rho0)

            moment_trajectory = moment_dynamics.integrate(
                self.drift_diffusion, initial, t_final, dt, sample_every
            )
            densities = fock_oracle.integrate_master(self.rig, rho0, t_final, dt, sample_every)
            report = self._compare(moment_trajectory, densities, initial_tail, dt)

            logger.info(
                f"Oracle comparison complete: mean deviation {report.max_mean_deviation:.3e}, "
                f"covariance deviation {report.max_covariance_deviation:.3e}"
            )
            return report

        except Exception as e:
            logger.error(f"Oracle comparison failed: {e}")
            raise

    def _check_tail(self, rho: DensityMatrix) -> float:
        tail = fock_oracle.cutoff_adequacy(rho, self.tail_levels)
        if tail > self.tail_tol:
            raise CutoffError(tail, self.tail_tol, self.cutoff)
        if tail > 1e-2 * self.tail_tol:
            logger.warning(f"Tail population {tail:.3e} at t={rho.time:g} is close to the threshold")
        return tail

    def _compare(
        self,
        moment_trajectory: Trajectory,
        densities: List[DensityMatrix],
        initial_tail: float,
        dt: float,
    ) -> OracleReport:
        sym = symplectic_form(self.system.n_modes)
        oracle_states: List[GaussianMomentState] = []
        max_mean = max_cov = 0.0
        max_tail = initial_tail
        max_third = 0.0
        min_phys = np.inf

        for expected, rho in zip(moment_trajectory.samples, densities):
            max_tail = max(max_tail, self._check_tail(rho))
            observed = fock_oracle.moments_from_density(self.rig, rho)
            oracle_states.append(observed)
            max_mean = max(max_mean, max_abs(observed.mean - expected.mean))
            max_cov = max(max_cov, max_abs(observed.covariance - expected.covariance))
            max_third = max(max_third, abs(fock_oracle.third_central_moment(self.rig, rho, 0)))
            min_phys = min(min_phys, moment_dynamics.check_physical(expected, sym).min_eigenvalue)

        oracle_trajectory = Trajectory.from_states(
            oracle_states,
            TrajectoryMetadata(
                integrator=ORACLE_INTEGRATOR_NAME,
                step_size=dt,
                system_fingerprint=self.system.fingerprint(),
                n_modes=self.system.n_modes,
            ),
        )
        return OracleReport(
            cutoff=self.cutoff,
            shared_samples=len(oracle_states),
            max_mean_deviation=max_mean,
            max_covariance_deviation=max_cov,
            initial_tail_population=initial_tail,
            max_tail_population=max_tail,
            max_third_moment=max_third,
            min_physicality_eigenvalue=float(min_phys),
            purity_gaussian=moment_dynamics.purity(moment_trajectory.final),
            purity_exact=fock_oracle.purity_exact(densities[-1]),
            moment_trajectory=moment_trajectory,
            oracle_trajectory=oracle_trajectory,
        )


def run_oracle_comparison(
    system: LinearOpenSystem,
    initial: GaussianMomentState,
    cutoff: int,
    t_final: float,
    dt: float,
    sample_every: int = 1,
) -> OracleReport:
    """Convenience wrapper around CrossValidator"""
    return CrossValidator(system, cutoff).run(initial, t_final, dt, sample_every)
