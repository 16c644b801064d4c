"""Pytest configuration and fixtures."""

from collections.abc import Iterator
from pathlib import Path

import numpy as np
import pytest
import structlog

from pczaa.fixtures import psi
from pczaa.models.grid import GridFunction
from pczaa.models.sequence import AASequence
from pczaa.services.extension import linear_extension, step_extension
from pczaa.storage.logging import configure_logging


@pytest.fixture(autouse=True)
def _quiet_logging() -> Iterator[None]:
    configure_logging()
    yield
    structlog.reset_defaults()


@pytest.fixture
def psi_sequence() -> AASequence:
    return AASequence.from_rule(psi, (-32, 32))


@pytest.fixture
def psi_linear(psi_sequence: AASequence) -> GridFunction:
    return linear_extension(psi_sequence, 32)


@pytest.fixture
def psi_step(psi_sequence: AASequence) -> GridFunction:
    return step_extension(psi_sequence, 32)


@pytest.fixture
def periodic_step() -> GridFunction:
    """Step extension of a sequence that repeats exactly with period 3."""
    values = np.tile([0.25, -1.0, 0.5], 22)
    return step_extension(AASequence((-33, 32), values), 8)


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    return tmp_path / "out"
