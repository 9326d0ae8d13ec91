"""Dissipative quantum interferometry in the biorthonormal formalism.

Modules: ``algebra`` (matrices, eigenpairs, branch tracking), ``biortho``
(generalized states), ``propagator`` (L/R pair integration),
``interferometer`` (Mach-Zehnder intensities, complex phase and visibility),
``geometric`` (gauge set, parallel transport, complex geometric phase),
``gate`` (dissipative geometric phase-shift gate) and ``cli``.
"""
from . import algebra, biortho, gate, geometric, interferometer, propagator
from .errors import ComputationError, ConfigError, DissintError

__all__ = [
    "algebra",
    "biortho",
    "propagator",
    "interferometer",
    "geometric",
    "gate",
    "ComputationError",
    "ConfigError",
    "DissintError",
]
__version__ = "0.1.0"
