"""
Simulation services
"""
from . import core_model, fock_oracle, moment_dynamics
from .cross_validation import CrossValidator, run_oracle_comparison
from .model_loader import load_model, model_from_file, parse_model

__all__ = [
    "core_model",
    "moment_dynamics",
    "fock_oracle",
    "CrossValidator",
    "run_oracle_comparison",
    "load_model",
    "model_from_file",
    "parse_model",
]
