"""
Cross-validation report
"""
from pydantic import BaseModel, ConfigDict

from app.models.state import Trajectory


class OracleReport(BaseModel):
    """Agreement between moment dynamics and the Fock-space master equation"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    cutoff: int
    shared_samples: int
    max_mean_deviation: float
    max_covariance_deviation: float
    initial_tail_population: float
    max_tail_population: float
    max_third_moment: float
    min_physicality_eigenvalue: float
    purity_gaussian: float
    purity_exact: float
    moment_trajectory: Trajectory
    oracle_trajectory: Trajectory

    @property
    def max_deviation(self) -> float:
        return max(self.max_mean_deviation, self.max_covariance_deviation)
