"""
Linear Open Quantum System Simulator
Gaussian moment dynamics with a truncated Fock-space cross-check
"""

__version__ = "1.0.0"
