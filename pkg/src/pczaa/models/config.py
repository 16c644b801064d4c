"""Run configuration for the command-line front end."""

from __future__ import annotations

import json
from enum import StrEnum
from pathlib import Path
from typing import Any, Self

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
)

from ..constants import (
    DEFAULT_MAX_ITER,
    DEFAULT_PICARD_TOL,
    DEFAULT_PRECISION,
    DEFAULT_SAMPLES_PER_UNIT,
    DEFAULT_SEED,
    DEFAULT_STEPS,
    DEFAULT_TRUNC_EPS,
    DEFAULT_WINDOW,
)
from ..exceptions import ConfigurationError
from ..services.extension import ExtensionKind

__all__ = ["ConvMode", "DepcaMode", "RunConfig", "Subcommand"]


class Subcommand(StrEnum):
    """Operations the command-line front end can run."""

    EXTEND = "extend"
    DIAGNOSE = "diagnose"
    CONV = "conv"
    HEAT = "heat"
    DEPCA = "depca"
    DEMO = "demo"


class ConvMode(StrEnum):
    """Which convolution operator ``conv`` applies."""

    FULL = "full"
    CAUSAL = "causal"
    HALFLINE = "halfline"


class DepcaMode(StrEnum):
    """Which DEPCA solver ``depca`` runs."""

    IVP = "ivp"
    BOUNDED = "bounded"
    LW = "lw"


class RunConfig(BaseModel):
    """Validated parameters of one command-line invocation."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Subcommand

    input: Path | None = Field(None, title="Input CSV file")

    out_dir: Path = Field(Path(), title="Directory for artifacts")

    precision: int = Field(DEFAULT_PRECISION, ge=1, le=17)

    seed: int = Field(DEFAULT_SEED, ge=0)

    debug: bool = False

    samples_per_unit: int = Field(DEFAULT_SAMPLES_PER_UNIT, ge=1, le=4096)

    window: tuple[int, int] = DEFAULT_WINDOW

    kind: ExtensionKind = ExtensionKind.LINEAR

    midpoint: str | None = Field(
        None, title="Coefficient expression evaluated at n + 1/2"
    )

    eps: float = Field(1e-2, gt=0)

    max_shift: int = Field(16, ge=1)

    conv_mode: ConvMode = ConvMode.FULL

    kernel: str = "gauss:0.5"

    trunc_eps: float = Field(DEFAULT_TRUNC_EPS, gt=0, lt=1)

    depca_mode: DepcaMode = DepcaMode.IVP

    a: str = "-1"

    b: str = "0"

    f: str = "psi"

    y0: float = 0.0

    steps: int = Field(DEFAULT_STEPS, ge=2, le=65536)

    delta: str = "1"

    p: str = "1"

    gamma: float = Field(0.5, ge=0)

    max_iter: int = Field(DEFAULT_MAX_ITER, ge=1)

    tol: float = Field(DEFAULT_PICARD_TOL, gt=0)

    @field_validator("window")
    @classmethod
    def _check_window(cls, v: tuple[int, int]) -> tuple[int, int]:
        if v[1] <= v[0]:
            raise ValueError(f"window {v} contains no piece")
        return v

    @field_validator("steps")
    @classmethod
    def _check_steps(cls, v: int) -> int:
        if v % 2:
            raise ValueError("steps must be even")
        return v

    @classmethod
    def build(cls, **values: Any) -> Self:
        """Validate ``values``, converting failures to
        `~pczaa.exceptions.ConfigurationError`.
        """
        try:
            return cls.model_validate(values)
        except ValidationError as e:
            raise ConfigurationError(str(e)) from e

    @classmethod
    def from_config(cls, config: Path, **overrides: Any) -> Self:
        """Load configuration from a JSON document.

        Keyword arguments override values from the file.
        """
        try:
            with config.open() as f:
                obj = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"Cannot read {config}: {e}") from e
        if not isinstance(obj, dict):
            raise ConfigurationError(f"{config} must hold a JSON object")
        return cls.build(**{**obj, **overrides})
