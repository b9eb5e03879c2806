"""Numerical companion for product-symbol multilinear Hilbert transforms.

Builds the chirp counterexample (phase vectors, strip polytopes), evaluates
its oscillatory integrals, and checks the logarithmic growth numerically.
"""

__version__ = "0.1.0"

from .errors import ChirpLabError, ConfigError, NumericalError

__all__ = ["ChirpLabError", "ConfigError", "NumericalError", "__version__"]
