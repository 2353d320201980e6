"""
atma - Aliased Time-Modulated Array OFDM Simulation
Closed-form harmonic analysis, sample-level link simulation and a
config-driven experiment runner.
"""

__version__ = "0.3.0"

from .cli import cli

__all__ = ["cli", "__version__"]
