"""Constants for pczaa."""

__all__ = [
    "APP_NAME",
    "CERTIFICATE_MARGIN",
    "CONTINUITY_TOLERANCE",
    "DEBUG_ENV_VAR",
    "DEFAULT_MAX_ITER",
    "DEFAULT_PICARD_TOL",
    "DEFAULT_PRECISION",
    "DEFAULT_SAMPLES_PER_UNIT",
    "DEFAULT_SEED",
    "DEFAULT_STEPS",
    "DEFAULT_TRUNC_EPS",
    "DEFAULT_UC_DELTAS",
    "DEFAULT_WINDOW",
    "DICHOTOMY_MARGIN",
    "HEAT_MASS_TOLERANCE",
    "LATTICE_TOLERANCE",
]

APP_NAME = "pczaa"
"""Application name, used for logging."""

DEBUG_ENV_VAR = "PCZAA_DEBUG"
"""Environment variable that turns on debug logging when non-empty."""

DEFAULT_SAMPLES_PER_UNIT = 64
"""Lattice points stored per unit interval.

Resolves the oscillation of the ψ fixture at desk scale while keeping
every operation in the millisecond range.
"""

DEFAULT_WINDOW = (-32, 32)
"""Default represented domain ``[n_lo, n_hi]``."""

DEFAULT_SEED = 0x5EED
"""Seed for every stochastic fixture (noise samples)."""

DEFAULT_PRECISION = 17
"""Significant digits written to CSV artifacts.

Seventeen digits is the smallest count that round-trips every IEEE
double exactly.
"""

DEFAULT_STEPS = 256
"""RK4 steps per unit interval for DEPCA solvers."""

DEFAULT_TRUNC_EPS = 1e-8
"""Default L1 truncation budget for convolution operators."""

DEFAULT_MAX_ITER = 200
"""Default Picard iteration budget for nonlinear DEPCA solvers."""

DEFAULT_PICARD_TOL = 1e-10
"""Sup-norm difference between Picard iterates at which iteration stops."""

DEFAULT_UC_DELTAS = tuple(2.0**-k for k in range(13))
"""Scales tabulated by the uniform-continuity modulus, 1 down to 2^-12."""

HEAT_MASS_TOLERANCE = 1e-10
"""Allowed deviation of the numerically integrated heat kernel mass
from one.
"""

CERTIFICATE_MARGIN = 1e-8
"""Smallest singular value below which a per-interval invertibility
certificate counts as failed.
"""

CONTINUITY_TOLERANCE = 1e-9
"""Largest jump at an integer that still counts as continuous."""

DICHOTOMY_MARGIN = 1e-6
"""Gap from one that per-direction contraction or expansion rates must
keep for the dichotomy check to pass.
"""

LATTICE_TOLERANCE = 1e-9
"""Distance, in units of the lattice spacing, within which a time
coordinate is snapped to the nearest lattice point.
"""
