"""
Tests for the command-line surface
"""
import io
import shutil
import sys
from pathlib import Path

import numpy as np
import pytest
from loguru import logger

from app.config import settings
from app.main import cli_dispatch, configure_logging
from app.utils.trajectory_csv import load_trajectory

SAMPLE_MODELS = Path(__file__).resolve().parent.parent / "sample_models"


def sample(tmp_path: Path, name: str) -> str:
    target = tmp_path / f"{name}.json"
    shutil.copy(SAMPLE_MODELS / f"{name}.json", target)
    return str(target)


def matrix_block(output: str, name: str) -> np.ndarray:
    """Parse the rows printed under `name =`"""
    lines = output.splitlines()
    start = lines.index(f"{name} =") + 1
    rows = []
    for line in lines[start:]:
        if not line.startswith("  ["):
            break
        rows.append([float(v) for v in line.strip()[1:-1].split(",")])
    return np.array(rows)


def scalar(output: str, name: str) -> float:
    for line in output.splitlines():
        if line.startswith(f"{name} = "):
            return float(line.split("=", 1)[1])
    raise AssertionError(f"{name} not printed")


class TestCliDispatch:
    """Test cases for cli_dispatch"""

    def test_unknown_subcommand(self, capsys):
        """Test usage errors exit with 2"""
        assert cli_dispatch(["frobnicate"]) == 2
        assert "usage" in capsys.readouterr().err

    def test_missing_subcommand(self, capsys):
        """Test a bare invocation is a usage error"""
        assert cli_dispatch([]) == 2

    def test_missing_required_flag(self, tmp_path, capsys):
        """Test simulate without --t-final is a usage error"""
        assert cli_dispatch(["simulate", sample(tmp_path, "damped"), "--out", str(tmp_path / "o.csv")]) == 2

    def test_missing_model_file(self, tmp_path, capsys):
        """Test an unreadable model exits with 1"""
        assert cli_dispatch(["build", str(tmp_path / "absent.json")]) == 1
        assert "error:" in capsys.readouterr().err


class TestBuildCommand:
    """Test cases for `build`"""

    def test_damped_oscillator(self, tmp_path, capsys):
        """Test A, D and ‖A‖₂ are printed"""
        assert cli_dispatch(["build", sample(tmp_path, "damped")]) == 0
        out = capsys.readouterr().out
        np.testing.assert_allclose(matrix_block(out, "A"), [[-0.25, 1.0], [-1.0, -0.25]], atol=1e-12)
        np.testing.assert_allclose(matrix_block(out, "D"), 0.25 * np.eye(2), atol=1e-12)
        assert scalar(out, "norm2_A") == pytest.approx(np.sqrt(1.0625), rel=1e-12)

    def test_closed_system_has_zero_diffusion(self, tmp_path, capsys):
        """Test C = 0 prints D = 0 exactly"""
        assert cli_dispatch(["build", sample(tmp_path, "closed")]) == 0
        out = capsys.readouterr().out
        lines = out.splitlines()
        start = lines.index("D =") + 1
        assert lines[start:start + 2] == ["  [+0.000000000000e+00, +0.000000000000e+00]"] * 2

    def test_output_is_deterministic(self, tmp_path, capsys):
        """Test two runs print identical bytes"""
        path = sample(tmp_path, "two_mode")
        cli_dispatch(["build", path])
        first = capsys.readouterr().out
        cli_dispatch(["build", path])
        assert capsys.readouterr().out == first


class TestSteadyStateCommand:
    """Test cases for `steadystate`"""

    def test_damped_oscillator(self, tmp_path, capsys):
        """Test V_ss ≈ I/2 and purity ≈ 1"""
        assert cli_dispatch(["steadystate", sample(tmp_path, "damped")]) == 0
        out = capsys.readouterr().out
        np.testing.assert_allclose(matrix_block(out, "V_ss"), 0.5 * np.eye(2), atol=1e-12)
        assert scalar(out, "purity") == pytest.approx(1.0, abs=1e-10)
        assert scalar(out, "residual") <= 1e-12

    def test_closed_oscillator_is_unstable(self, tmp_path, capsys):
        """Test the unstable diagnosis lists offending eigenvalues"""
        assert cli_dispatch(["steadystate", sample(tmp_path, "closed")]) == 1
        out = capsys.readouterr().out
        assert out.startswith("unstable")
        assert out.count("offending eigenvalue") == 2


class TestValidateCommand:
    """Test cases for `validate`"""

    def test_valid_model(self, tmp_path, capsys):
        """Test every check passes and the initial purity is printed"""
        assert cli_dispatch(["validate", sample(tmp_path, "squeezed_closed")]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert "PASS initial_state_physical" in out
        assert scalar(out, "initial_purity") == pytest.approx(1.0, abs=1e-12)

    def test_asymmetric_model(self, tmp_path, capsys):
        """Test failures are printed and exit with 1"""
        path = tmp_path / "bad.json"
        path.write_text(
            '{"n_modes": 1, "hamiltonian": [[1.0, 0.3], [0.1, 1.0]], "coupling": [[[0.0, 0.0], [0.0, 0.0]]]}'
        )
        assert cli_dispatch(["validate", str(path)]) == 1
        out = capsys.readouterr().out
        assert "FAIL hamiltonian_symmetric: asymmetric Hamiltonian" in out

    def test_unphysical_initial_state(self, tmp_path, capsys):
        """Test an initial V below the vacuum fails the physicality line"""
        path = tmp_path / "squashed.json"
        path.write_text(
            '{"n_modes": 1, "hamiltonian": [[1.0, 0.0], [0.0, 1.0]], '
            '"coupling": [[[0.0, 0.0], [0.0, 0.0]]], "initial_cov": [[0.25, 0.0], [0.0, 0.25]]}'
        )
        assert cli_dispatch(["validate", str(path)]) == 1
        assert "FAIL initial_state_physical" in capsys.readouterr().out


class TestSimulateCommand:
    """Test cases for `simulate`"""

    def test_writes_trajectory(self, tmp_path, capsys):
        """Test the CSV covers [0, t_final] at the requested step"""
        out_path = tmp_path / "traj.csv"
        code = cli_dispatch([
            "simulate", sample(tmp_path, "damped"), "--t-final", "2.0", "--dt", "0.1", "--out", str(out_path),
        ])
        assert code == 0
        trajectory = load_trajectory(out_path)
        assert len(trajectory) == 21
        assert trajectory.times[-1] == 2.0
        assert trajectory.metadata.integrator == "rk4"
        assert scalar(capsys.readouterr().out, "dt") == 0.1

    def test_default_step(self, tmp_path, capsys):
        """Test --dt defaults to 0.1/max(1, ‖A‖₂)"""
        out_path = tmp_path / "traj.csv"
        assert cli_dispatch(["simulate", sample(tmp_path, "damped"), "--t-final", "1.0", "--out", str(out_path)]) == 0
        assert scalar(capsys.readouterr().out, "dt") == pytest.approx(0.1 / np.sqrt(1.0625), rel=1e-12)

    def test_data_file_is_deterministic(self, tmp_path, capsys):
        """Test repeated runs write identical data rows"""
        model = sample(tmp_path, "two_mode")
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            cli_dispatch(["simulate", model, "--t-final", "1.5", "--dt", "0.05", "--out", str(path)])

        def data(path):
            return [line for line in path.read_text().splitlines() if not line.startswith("#")]

        assert data(paths[0]) == data(paths[1])


class TestOracleCommand:
    """Test cases for `oracle`"""

    def test_damped_coherent_agreement(self, tmp_path, capsys):
        """Test the engines agree on a damped coherent state"""
        model = tmp_path / "coherent.json"
        model.write_text(
            '{"n_modes": 1, "hamiltonian": [[1.0, 0.0], [0.0, 1.0]], '
            '"coupling": [[[0.5, 0.0], [0.0, 0.5]]], "initial_mean": [0.7071067811865476, 0.0]}'
        )
        out_path = tmp_path / "oracle.csv"
        code = cli_dispatch([
            "oracle", str(model), "--cutoff", "20", "--t-final", "2.0", "--dt", "0.001", "--out", str(out_path),
        ])
        out = capsys.readouterr().out
        assert code == 0
        assert scalar(out, "max_mean_deviation") <= 1e-3
        assert scalar(out, "max_covariance_deviation") <= 1e-3
        assert scalar(out, "max_tail_population") <= 1e-8
        assert "engines agree" in out
        assert load_trajectory(out_path).metadata.integrator == "rk4-master"

    def test_hot_thermal_inadequate_cutoff(self, tmp_path, capsys):
        """Test a hot thermal state at cutoff 4 exits 1 with the cutoff message"""
        code = cli_dispatch(["oracle", sample(tmp_path, "hot_thermal"), "--cutoff", "4", "--t-final", "1.0"])
        assert code == 1
        assert "cutoff 4 is inadequate" in capsys.readouterr().err

    def test_too_many_modes(self, tmp_path, capsys):
        """Test the oracle refuses systems beyond its mode limit"""
        path = tmp_path / "three.json"
        path.write_text(
            '{"n_modes": 3, "hamiltonian": ' + str(np.eye(6).tolist()) + ', '
            '"coupling": [[[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]]}'
        )
        assert cli_dispatch(["oracle", str(path), "--t-final", "1.0"]) == 1
        assert "at most 2 modes" in capsys.readouterr().err


class TestConfigureLogging:
    """Test cases for configure_logging"""

    def test_sink_follows_replaced_stderr(self, monkeypatch):
        """Test messages go to whatever sys.stderr is when they are logged"""
        configure_logging("INFO")
        replacement = io.StringIO()
        monkeypatch.setattr(sys, "stderr", replacement)
        logger.info("routed to the current stream")
        assert "routed to the current stream" in replacement.getvalue()

    def test_repeated_dispatch_keeps_logging_usable(self, tmp_path, capsys):
        """Test a second run after the first captured stream is gone still logs cleanly"""
        model = sample(tmp_path, "damped")
        assert cli_dispatch(["build", model]) == 0
        capsys.readouterr()
        assert cli_dispatch(["--log-level", "INFO", "build", model]) == 0
        assert "Logging error" not in capsys.readouterr().err

    def test_debug_flag_lowers_default_level(self, monkeypatch):
        """Test DEBUG=True lets debug messages through without an explicit level"""
        monkeypatch.setattr(settings, "DEBUG", True)
        configure_logging()
        replacement = io.StringIO()
        monkeypatch.setattr(sys, "stderr", replacement)
        logger.debug("per-step detail")
        assert "per-step detail" in replacement.getvalue()
