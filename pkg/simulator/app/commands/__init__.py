"""
CLI subcommands
"""
from .model_commands import register as register_model_commands
from .simulation_commands import register as register_simulation_commands

__all__ = ["register_model_commands", "register_simulation_commands"]
