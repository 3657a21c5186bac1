"""
Shared fixtures
"""
import numpy as np
import pytest

from app.models.system import LinearOpenSystem
from app.services.core_model import build_drift_diffusion


def damping_row(kappa: float, mode: int = 0, n_modes: int = 1) -> np.ndarray:
    """Coupling row for ĉ = √κ·a on one mode"""
    row = np.zeros(2 * n_modes, dtype=np.complex128)
    amplitude = np.sqrt(kappa / 2.0)
    row[mode] = amplitude
    row[n_modes + mode] = 1j * amplitude
    return row


def random_system(rng: np.random.Generator, n_modes: int, n_channels: int) -> LinearOpenSystem:
    size = 2 * n_modes
    raw = rng.normal(size=(size, size))
    coupling = rng.normal(size=(n_channels, size)) + 1j * rng.normal(size=(n_channels, size))
    return LinearOpenSystem(n_modes=n_modes, hamiltonian=raw + raw.T, coupling=coupling)


@pytest.fixture
def damped_system():
    """ω = 1, κ = 0.5"""
    return LinearOpenSystem(n_modes=1, hamiltonian=np.eye(2), coupling=[damping_row(0.5)])


@pytest.fixture
def damped_ad(damped_system):
    return build_drift_diffusion(damped_system)


@pytest.fixture
def two_channel_system():
    """ω = 1 with loss channels κ₁ = 0.4 and κ₂ = 0.3"""
    return LinearOpenSystem(
        n_modes=1,
        hamiltonian=np.eye(2),
        coupling=[damping_row(0.4), damping_row(0.3)],
    )


@pytest.fixture
def closed_system():
    return LinearOpenSystem(n_modes=1, hamiltonian=np.eye(2), coupling=np.zeros((1, 2)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
