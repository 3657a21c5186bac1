"""
Simulation commands: simulate, oracle
"""
import argparse
import math
from pathlib import Path

from loguru import logger

from app.config import tolerances
from app.services import moment_dynamics
from app.services.core_model import build_drift_diffusion
from app.services.cross_validation import CrossValidator
from app.services.model_loader import load_model
from app.utils.formatting import format_matrix, format_number, format_scalar, format_vector
from app.utils.time_grid import step_count
from app.utils.trajectory_csv import save_trajectory


def register(subparsers: argparse._SubParsersAction) -> None:
    simulate = subparsers.add_parser("simulate", help="integrate the moment equations")
    simulate.add_argument("model", type=Path)
    simulate.add_argument("--t-final", type=float, required=True)
    simulate.add_argument("--dt", type=float, default=None, help="default: 0.1/max(1, ‖A‖₂)")
    simulate.add_argument("--out", type=Path, required=True)
    simulate.set_defaults(handler=run_simulate)

    oracle = subparsers.add_parser("oracle", help="cross-check against the Fock-space master equation")
    oracle.add_argument("model", type=Path)
    oracle.add_argument("--cutoff", type=int, default=tolerances.DEFAULT_CUTOFF)
    oracle.add_argument("--t-final", type=float, required=True)
    oracle.add_argument("--dt", type=float, default=None, help="default: 0.1/max(1, ‖A‖₂)")
    oracle.add_argument("--out", type=Path, default=None, help="CSV of oracle-extracted moments")
    oracle.set_defaults(handler=run_oracle)


def run_simulate(args: argparse.Namespace) -> int:
    system, initial = load_model(args.model)
    ad = build_drift_diffusion(system)
    dt = args.dt if args.dt is not None else moment_dynamics.suggested_step(ad)
    trajectory = moment_dynamics.integrate(ad, initial, args.t_final, dt)
    save_trajectory(trajectory, args.out)

    final = trajectory.final
    physicality = moment_dynamics.check_physical(final)
    print(f"samples = {len(trajectory)}")
    print(format_scalar("dt", dt))
    print(format_vector("final_mean", final.mean))
    print(format_matrix("final_V", final.covariance))
    print(format_scalar("final_min_uncertainty_eigenvalue", physicality.min_eigenvalue))
    return 0


def run_oracle(args: argparse.Namespace) -> int:
    system, initial = load_model(args.model)
    validator = CrossValidator(system, args.cutoff)
    dt = args.dt if args.dt is not None else moment_dynamics.suggested_step(validator.drift_diffusion)
    n_steps = step_count(args.t_final - initial.time, dt)
    sample_every = max(1, math.ceil(n_steps / tolerances.ORACLE_MAX_SAMPLES))

    report = validator.run(initial, args.t_final, dt, sample_every)
    if args.out is not None:
        save_trajectory(report.oracle_trajectory, args.out)

    print(f"shared_samples = {report.shared_samples}")
    print(format_scalar("dt", dt))
    print(format_scalar("max_mean_deviation", report.max_mean_deviation))
    print(format_scalar("max_covariance_deviation", report.max_covariance_deviation))
    print(format_scalar("max_tail_population", report.max_tail_population))
    print(format_scalar("max_third_central_moment", report.max_third_moment))
    print(format_scalar("purity_gaussian", report.purity_gaussian))
    print(format_scalar("purity_exact", report.purity_exact))

    agreed = report.max_deviation <= tolerances.ORACLE_AGREEMENT_TOL
    verdict = "agree" if agreed else "DISAGREE"
    print(f"engines {verdict} within {format_number(tolerances.ORACLE_AGREEMENT_TOL)}")
    if not agreed:
        logger.error(f"Oracle deviation {report.max_deviation:.3e} exceeds tolerance")
    return 0 if agreed else 1
