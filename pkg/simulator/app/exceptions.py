"""
Error hierarchy for the simulator

Every library failure derives from SimulationError so the CLI can map it to
exit code 1 in one place.
"""
from typing import TYPE_CHECKING, Optional, Sequence

if TYPE_CHECKING:
    from app.models.system import ValidationReport


class SimulationError(Exception):
    """Base class for simulator failures"""


class ModelValidationError(SimulationError, ValueError):
    """A LinearOpenSystem failed validate_model"""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        details = "; ".join(f"{c.name}: {c.detail}" for c in report.failures)
        super().__init__(f"Model validation failed: {details}")


class DimensionMismatchError(SimulationError, ValueError):
    """Operands have incompatible shapes"""


class RealCastError(SimulationError, ValueError):
    """An imaginary residue exceeded the real-cast tolerance"""


class IntegrationError(SimulationError, RuntimeError):
    """A time integration went non-finite or drifted out of tolerance"""


class UnstableSystemError(SimulationError):
    """The drift matrix is not Hurwitz, so no stationary covariance exists"""

    def __init__(self, offending: Sequence[complex], message: Optional[str] = None):
        self.offending = list(offending)
        listed = ", ".join(f"{z.real:+.6e}{z.imag:+.6e}j" for z in self.offending)
        super().__init__(message or f"Drift matrix is not Hurwitz (offending eigenvalues: {listed})")


class UnphysicalStateError(SimulationError, ValueError):
    """A covariance matrix cannot describe a quantum state"""


class CutoffError(SimulationError):
    """The Fock cutoff is too small for the state being simulated"""

    def __init__(self, tail_population: float, threshold: float, cutoff: int):
        self.tail_population = tail_population
        self.threshold = threshold
        self.cutoff = cutoff
        super().__init__(
            f"Fock cutoff {cutoff} is inadequate: tail population "
            f"{tail_population:.3e} exceeds {threshold:.1e}; increase --cutoff"
        )


class ModelFileError(SimulationError, ValueError):
    """A model file could not be parsed or does not match the schema"""
