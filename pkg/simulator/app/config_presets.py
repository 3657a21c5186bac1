"""Preset models - Named reference systems used by tests, scripts and sample files"""
import math
from typing import Dict, Tuple

from app.models.files import ModelFile
from app.models.state import GaussianMomentState
from app.models.system import LinearOpenSystem
from app.services.model_loader import model_from_file


def _amplitude_damping(rate: float) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """Coupling row for c = √rate · a on a single mode"""
    r = math.sqrt(rate / 2.0)
    return ((r, 0.0), (0.0, r))


PRESET_MODELS: Dict[str, ModelFile] = {
    "damped": ModelFile(
        n_modes=1,
        hamiltonian=[[1.0, 0.0], [0.0, 1.0]],
        coupling=[list(_amplitude_damping(0.5))],
        labels=["damped oscillator", "omega=1", "kappa=0.5"],
    ),
    "two_channel": ModelFile(
        n_modes=1,
        hamiltonian=[[1.0, 0.0], [0.0, 1.0]],
        coupling=[list(_amplitude_damping(0.4)), list(_amplitude_damping(0.3))],
        labels=["two loss channels", "kappa1=0.4", "kappa2=0.3"],
    ),
    "closed": ModelFile(
        n_modes=1,
        hamiltonian=[[1.0, 0.0], [0.0, 1.0]],
        coupling=[[(0.0, 0.0), (0.0, 0.0)]],
        initial_mean=[1.0, 0.0],
        labels=["closed oscillator"],
    ),
    "squeezed_closed": ModelFile(
        n_modes=1,
        hamiltonian=[[1.0, 0.0], [0.0, 1.0]],
        coupling=[[(0.0, 0.0), (0.0, 0.0)]],
        initial_cov=[[1.0, 0.0], [0.0, 0.25]],
        labels=["squeezed vacuum, no damping"],
    ),
    "hot_thermal": ModelFile(
        n_modes=1,
        hamiltonian=[[1.0, 0.0], [0.0, 1.0]],
        coupling=[list(_amplitude_damping(0.5))],
        initial_cov=[[5.0, 0.0], [0.0, 5.0]],
        labels=["thermal state nbar=4.5 relaxing to vacuum"],
    ),
    "two_mode": ModelFile(
        n_modes=2,
        hamiltonian=[
            [1.0, 0.2, 0.0, 0.0],
            [0.2, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.2],
            [0.0, 0.0, 0.2, 1.0],
        ],
        coupling=[[(0.5, 0.0), (0.0, 0.0), (0.0, 0.5), (0.0, 0.0)]],
        initial_mean=[1.0, 0.0, 0.0, 0.0],
        labels=["beam-splitter pair", "g=0.2", "loss on mode 1"],
    ),
}


def preset_model(name: str) -> Tuple[LinearOpenSystem, GaussianMomentState]:
    """
    Validated system and initial state for a named preset

    Raises:
        KeyError: If the preset does not exist
    """
    if name not in PRESET_MODELS:
        raise KeyError(f"unknown preset '{name}'; available: {', '.join(sorted(PRESET_MODELS))}")
    return model_from_file(PRESET_MODELS[name])
