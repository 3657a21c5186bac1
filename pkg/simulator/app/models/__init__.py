"""
Pydantic domain types
"""
from .system import (
    SymplecticForm,
    LinearOpenSystem,
    DriftDiffusion,
    ValidationCheck,
    ValidationReport
)
from .state import (
    GaussianMomentState,
    PhysicalityReport,
    SteadyStateResult,
    Trajectory,
    TrajectoryMetadata
)
from .fock import (
    FockRig,
    DensityMatrix
)
from .files import ModelFile
from .report import OracleReport

__all__ = [
    "SymplecticForm",
    "LinearOpenSystem",
    "DriftDiffusion",
    "ValidationCheck",
    "ValidationReport",
    "GaussianMomentState",
    "PhysicalityReport",
    "SteadyStateResult",
    "Trajectory",
    "TrajectoryMetadata",
    "FockRig",
    "DensityMatrix",
    "ModelFile",
    "OracleReport"
]
