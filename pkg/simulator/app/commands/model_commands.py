"""
Model commands: build, validate, steadystate
"""
import argparse
from pathlib import Path

from loguru import logger

from app.models.state import GaussianMomentState
from app.services import moment_dynamics
from app.services.core_model import build_drift_diffusion, validate_model
from app.services.model_loader import load_model, model_from_file, parse_model, system_from_file
from app.utils.formatting import format_complex, format_matrix, format_number, format_scalar


def register(subparsers: argparse._SubParsersAction) -> None:
    build = subparsers.add_parser("build", help="print drift A, diffusion D and ‖A‖₂")
    build.add_argument("model", type=Path)
    build.set_defaults(handler=run_build)

    validate = subparsers.add_parser("validate", help="print the validation and physicality report")
    validate.add_argument("model", type=Path)
    validate.set_defaults(handler=run_validate)

    steady = subparsers.add_parser("steadystate", help="solve for the stationary covariance")
    steady.add_argument("model", type=Path)
    steady.set_defaults(handler=run_steadystate)


def run_build(args: argparse.Namespace) -> int:
    system, _ = load_model(args.model)
    ad = build_drift_diffusion(system)
    print(format_matrix("A", ad.drift))
    print(format_matrix("D", ad.diffusion))
    print(format_scalar("norm2_A", moment_dynamics.drift_norm(ad)))
    print(format_scalar("suggested_dt", moment_dynamics.suggested_step(ad)))
    return 0


def run_validate(args: argparse.Namespace) -> int:
    model_file = parse_model(args.model.read_text(encoding="utf-8"), source=str(args.model))
    report = validate_model(system_from_file(model_file))
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        line = f"{status} {check.name}"
        print(f"{line}: {check.detail}" if check.detail else line)
    if not report.passed:
        logger.warning(f"{args.model} failed {len(report.failures)} validation checks")
        return 1

    _, state = model_from_file(model_file)
    physicality = moment_dynamics.check_physical(state)
    status = "PASS" if physicality.physical else "FAIL"
    print(f"{status} initial_state_physical: min eigenvalue of V + (i/2)Σ = {format_number(physicality.min_eigenvalue)}")
    if physicality.physical:
        print(format_scalar("initial_purity", moment_dynamics.purity(state)))
    return 0 if physicality.physical else 1


def run_steadystate(args: argparse.Namespace) -> int:
    system, _ = load_model(args.model)
    ad = build_drift_diffusion(system)
    result = moment_dynamics.steady_state(ad)
    if not result.stable:
        print("unstable: drift matrix is not Hurwitz; no stationary covariance")
        for z in result.offending_eigenvalues:
            print(f"  offending eigenvalue {format_complex(z)}")
        return 1

    covariance = result.require_covariance()
    print(format_matrix("V_ss", covariance))
    print(format_scalar("residual", result.residual))
    state = GaussianMomentState(mean=[0.0] * ad.dimension, covariance=covariance)
    print(format_scalar("purity", moment_dynamics.purity(state)))
    return 0
