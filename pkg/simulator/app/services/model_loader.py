"""Model loader service - model files to validated systems and initial states"""
import json
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from loguru import logger
from pydantic import ValidationError

from app.exceptions import ModelFileError
from app.models.files import ModelFile
from app.models.state import GaussianMomentState
from app.models.system import LinearOpenSystem
from app.services.core_model import prepare_system
from app.services.moment_dynamics import vacuum_state


def _describe(error: ValidationError) -> str:
    """Flatten pydantic errors into one line per problem"""
    problems = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "<root>"
        if item["type"] == "extra_forbidden":
            problems.append(f"unknown key '{location}'")
        else:
            problems.append(f"{location}: {item['msg']}")
    return "; ".join(problems)


def system_from_file(model_file: ModelFile) -> LinearOpenSystem:
    """
    Build the unvalidated system described by a ModelFile

    Raises:
        ModelFileError: If the arrays are ragged
    """
    size = 2 * model_file.n_modes
    try:
        if model_file.coupling:
            coupling = np.array([[complex(re, im) for re, im in row] for row in model_file.coupling])
        else:
            coupling = np.zeros((0, max(size, 0)), dtype=np.complex128)
        system = LinearOpenSystem(
            n_modes=model_file.n_modes,
            hamiltonian=model_file.hamiltonian,
            coupling=coupling,
            labels=model_file.labels or [],
        )
    except (ValidationError, ValueError) as e:
        raise ModelFileError(f"malformed model arrays: {e}") from e
    return system


def model_from_file(model_file: ModelFile) -> Tuple[LinearOpenSystem, GaussianMomentState]:
    """
    Turn a parsed ModelFile into a validated system and its initial state

    Raises:
        ModelValidationError: If the system fails validate_model
        ModelFileError: If arrays are ragged or the initial state is malformed
    """
    n = model_file.n_modes
    size = 2 * n
    system = prepare_system(system_from_file(model_file))

    try:
        state = vacuum_state(n)
        if model_file.initial_mean is not None or model_file.initial_cov is not None:
            state = GaussianMomentState(
                time=0.0,
                mean=model_file.initial_mean if model_file.initial_mean is not None else state.mean,
                covariance=model_file.initial_cov if model_file.initial_cov is not None else state.covariance,
            )
    except (ValidationError, ValueError) as e:
        raise ModelFileError(f"malformed initial state: {e}") from e
    if state.dimension != size:
        raise ModelFileError(f"initial state has dimension {state.dimension}, expected {size}")

    return system, state


def parse_model(text: str, source: str = "<string>") -> ModelFile:
    """
    Parse model-file JSON against the schema

    Raises:
        ModelFileError: With line context on syntax errors, or the schema problems
    """
    try:
        json.loads(text)
    except json.JSONDecodeError as e:
        lines = text.splitlines()
        context = lines[e.lineno - 1] if 0 < e.lineno <= len(lines) else ""
        raise ModelFileError(
            f"{source}: parse error at line {e.lineno}, column {e.colno}: {e.msg}\n    {context}"
        ) from e
    try:
        return ModelFile.model_validate_json(text)
    except ValidationError as e:
        raise ModelFileError(f"{source}: schema error: {_describe(e)}") from e


def load_model(path: Union[str, Path]) -> Tuple[LinearOpenSystem, GaussianMomentState]:
    """
    Load, schema-check and validate a model file

    Args:
        path: JSON model file

    Returns:
        (validated system, initial state with defaults applied)

    Raises:
        OSError: If the file cannot be read
        ModelFileError: On parse or schema errors
        ModelValidationError: If the system fails validate_model
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    model_file = parse_model(text, source=str(path))
    system, state = model_from_file(model_file)
    logger.info(f"Loaded model {path.name}: N={system.n_modes}, K={system.n_channels}")
    return system, state
