"""
Tests for settings, tolerances and preset models
"""
import json
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from app.config import Settings, Tolerances, tolerances
from app.config_presets import PRESET_MODELS, preset_model
from app.services.core_model import build_drift_diffusion
from app.services.model_loader import parse_model
from app.services.moment_dynamics import check_physical, steady_state

SAMPLE_MODELS = Path(__file__).resolve().parent.parent / "sample_models"


class TestSettings:
    """Test cases for Settings and Tolerances"""

    def test_defaults(self, monkeypatch):
        """Test the default log level"""
        monkeypatch.delenv("LOQS_LOG_LEVEL", raising=False)
        assert Settings(_env_file=None).LOG_LEVEL == "INFO"

    def test_environment_override(self, monkeypatch):
        """Test LOQS_-prefixed variables are read"""
        monkeypatch.setenv("LOQS_LOG_LEVEL", "DEBUG")
        assert Settings(_env_file=None).LOG_LEVEL == "DEBUG"

    def test_tolerances_are_frozen(self):
        """Test thresholds cannot be changed at runtime"""
        with pytest.raises(ValidationError):
            tolerances.SYM_TOL = 1.0

    def test_tolerance_defaults(self):
        """Test the documented thresholds"""
        defaults = Tolerances()
        assert defaults.HURWITZ_TOL == 1e-10
        assert defaults.PHYS_TOL == 1e-9
        assert defaults.TAIL_POPULATION_TOL == 1e-8
        assert defaults.ORACLE_AGREEMENT_TOL == 1e-3
        assert defaults.DEFAULT_CUTOFF == 20


class TestPresetModels:
    """Test cases for the preset registry"""

    @pytest.mark.parametrize("name", sorted(PRESET_MODELS))
    def test_presets_load_and_are_physical(self, name):
        """Test every preset validates and starts in a physical state"""
        system, state = preset_model(name)
        assert state.dimension == system.dimension
        assert check_physical(state).physical

    def test_damped_preset_matches_fixture(self, damped_ad):
        """Test the damped preset is the ω=1, κ=0.5 oscillator"""
        system, _ = preset_model("damped")
        ad = build_drift_diffusion(system)
        np.testing.assert_allclose(ad.drift, damped_ad.drift, atol=1e-15)
        np.testing.assert_allclose(ad.diffusion, damped_ad.diffusion, atol=1e-15)

    @pytest.mark.parametrize("name, stable", [("damped", True), ("two_channel", True), ("closed", False)])
    def test_stability(self, name, stable):
        """Test which presets have a stationary covariance"""
        system, _ = preset_model(name)
        assert steady_state(build_drift_diffusion(system)).stable is stable

    def test_unknown_preset(self):
        """Test unknown names list the available presets"""
        with pytest.raises(KeyError) as excinfo:
            preset_model("undamped")
        assert "damped" in str(excinfo.value)

    @pytest.mark.parametrize("name", sorted(PRESET_MODELS))
    def test_sample_files_match_presets(self, name):
        """Test sample_models/*.json describe the same models as the registry"""
        from_file = parse_model((SAMPLE_MODELS / f"{name}.json").read_text(), source=name)
        preset = PRESET_MODELS[name]
        assert from_file.n_modes == preset.n_modes
        np.testing.assert_allclose(from_file.hamiltonian, preset.hamiltonian, atol=1e-15)
        np.testing.assert_allclose(np.array(from_file.coupling), np.array(preset.coupling), atol=1e-15)
        assert from_file.initial_mean == preset.initial_mean
        assert from_file.initial_cov == preset.initial_cov

    def test_sample_files_are_json(self):
        """Test every sample file parses as plain JSON"""
        for path in SAMPLE_MODELS.glob("*.json"):
            assert "n_modes" in json.loads(path.read_text())
