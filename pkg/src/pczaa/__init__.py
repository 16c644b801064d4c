"""Numerics for almost automorphic functions with piecewise constant
arguments.
"""

from importlib.metadata import PackageNotFoundError, version

from .exceptions import (
    ConfigurationError,
    ContractViolationError,
    DomainError,
    IllPosedError,
    IncompatibleShapeError,
    NonConvergenceError,
    NumericalContractError,
    PczaaError,
    UnsupportedCaseError,
    ValidationError,
)
from .models.depca import DepcaSolution, DepcaSystem, DifferenceSystem
from .models.grid import ClosedGridFunction, GridFunction
from .models.kernel import HeatKernel, Kernel
from .models.sequence import AASequence

__version__: str
"""The application version string of (PEP 440 / SemVer compatible)."""

try:
    __version__ = version(__name__)
except PackageNotFoundError:
    # package is not installed
    __version__ = "0.0.0"


__all__ = [
    "AASequence",
    "ClosedGridFunction",
    "ConfigurationError",
    "ContractViolationError",
    "DepcaSolution",
    "DepcaSystem",
    "DifferenceSystem",
    "DomainError",
    "GridFunction",
    "HeatKernel",
    "IllPosedError",
    "IncompatibleShapeError",
    "Kernel",
    "NonConvergenceError",
    "NumericalContractError",
    "PczaaError",
    "UnsupportedCaseError",
    "ValidationError",
    "__version__",
]
