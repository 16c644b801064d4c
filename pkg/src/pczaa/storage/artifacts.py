"""CSV and JSON artifacts.

A sampled function is written one row per lattice point::

    t,v1,...,vp,is_left_limit

Each piece's interior samples are followed by a row carrying its left
limit at the next integer, with ``t = n + 1`` and ``is_left_limit = 1``.
Sequences use ``n,v1,...,vp``.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Mapping
from pathlib import Path
from typing import Any

import numpy as np
import structlog
from pydantic import BaseModel

from ..constants import APP_NAME, DEFAULT_PRECISION, LATTICE_TOLERANCE
from ..exceptions import ConfigurationError
from ..models.grid import GridFunction
from ..models.sequence import AASequence

__all__ = [
    "ArtifactWriter",
    "format_grid_csv",
    "format_sequence_csv",
    "read_grid_csv",
    "read_sequence_csv",
]


def _header(first: str, dim: int, *extra: str) -> str:
    return ",".join([first, *(f"v{i}" for i in range(1, dim + 1)), *extra])


def _format_rows(rows: np.ndarray, fmt: list[str]) -> str:
    return "".join(
        ",".join(f % x for f, x in zip(fmt, row, strict=True)) + "\n"
        for row in rows
    )


def format_grid_csv(
    f: GridFunction, precision: int = DEFAULT_PRECISION
) -> str:
    """Render ``f`` in the lattice CSV format."""
    m = f.samples_per_unit
    times = np.concatenate(
        [f.lattice(), np.arange(f.window[0] + 1, f.window[1] + 1)[:, None]],
        axis=1,
    )
    flags = np.zeros((f.n_pieces, m + 1))
    flags[:, -1] = 1
    rows = np.concatenate(
        [
            times.reshape(-1, 1),
            f.closed_pieces().reshape(-1, f.dim),
            flags.reshape(-1, 1),
        ],
        axis=1,
    )
    value = f"%.{precision}g"
    fmt = [value] * (f.dim + 1) + ["%d"]
    header = _header("t", f.dim, "is_left_limit")
    return header + "\n" + _format_rows(rows, fmt)


def format_sequence_csv(
    sequence: AASequence, precision: int = DEFAULT_PRECISION
) -> str:
    rows = np.concatenate(
        [sequence.indices[:, None].astype(float), sequence.values], axis=1
    )
    fmt = ["%d"] + [f"%.{precision}g"] * sequence.dim
    return _header("n", sequence.dim) + "\n" + _format_rows(rows, fmt)


def _load(path: Path, first: str) -> np.ndarray:
    try:
        with path.open() as handle:
            header = handle.readline().strip().split(",")
            if not header or header[0] != first:
                raise ConfigurationError(
                    f"{path}: expected a header starting with {first!r}"
                )
            data = np.loadtxt(handle, delimiter=",", ndmin=2)
    except OSError as e:
        raise ConfigurationError(f"Cannot read {path}: {e}") from e
    except ValueError as e:
        raise ConfigurationError(f"{path}: {e}") from e
    if data.shape[0] == 0 or data.shape[1] != len(header):
        raise ConfigurationError(f"{path}: rows do not match the header")
    return data


def read_grid_csv(path: Path) -> GridFunction:
    """Read a function written by `format_grid_csv`.

    Raises
    ------
    ConfigurationError
        Raised if the file is malformed or does not cover every lattice
        point and left-limit slot of its window exactly once.
    """
    data = _load(path, "t")
    times = data[:, 0]
    values = data[:, 1:-1]
    limit = data[:, -1] == 1
    if not np.any(limit) or np.all(limit):
        raise ConfigurationError(f"{path}: needs samples and left limits")
    n_lo = math.floor(times[~limit].min() + LATTICE_TOLERANCE)
    n_hi = round(times[limit].max())
    pieces = n_hi - n_lo
    if pieces < 1 or (~limit).sum() % pieces:
        raise ConfigurationError(f"{path}: inconsistent lattice")
    m = int((~limit).sum()) // pieces
    interior = times[~limit]
    rows = np.floor(interior + LATTICE_TOLERANCE).astype(int) - n_lo
    cols = np.rint(
        (interior - np.floor(interior + LATTICE_TOLERANCE)) * m
    ).astype(int)
    ends = np.rint(times[limit]).astype(int) - n_lo - 1
    if (
        rows.max() >= pieces
        or cols.max() >= m
        or ends.min() < 0
        or ends.max() >= pieces
    ):
        raise ConfigurationError(f"{path}: samples outside the lattice")
    samples = np.full((pieces, m, values.shape[1]), np.nan)
    samples[rows, cols] = values[~limit]
    lefts = np.full((pieces, values.shape[1]), np.nan)
    lefts[ends] = values[limit]
    if np.isnan(samples).any() or np.isnan(lefts).any():
        raise ConfigurationError(f"{path}: lattice has gaps")
    return GridFunction((n_lo, n_hi), m, samples, lefts)


def read_sequence_csv(path: Path) -> AASequence:
    """Read ``n,v1,...,vp`` rows with consecutive ``n``."""
    data = _load(path, "n")
    n = data[:, 0].astype(int)
    if not np.array_equal(n, np.arange(n[0], n[0] + len(n))):
        raise ConfigurationError(f"{path}: indices must be consecutive")
    return AASequence((int(n[0]), int(n[-1])), data[:, 1:])


class ArtifactWriter:
    """Write artifacts into one output directory.

    Every write produces a new file; nothing is appended or edited in
    place.  Output depends only on the data, so repeated runs give
    byte-identical files.

    Parameters
    ----------
    out_dir
        Directory to write into; created if missing.
    precision
        Significant digits for floating-point CSV fields.
    logger
        Logger to use; by default the ``pczaa`` logger.
    """

    def __init__(
        self,
        out_dir: Path,
        *,
        precision: int = DEFAULT_PRECISION,
        logger: structlog.BoundLogger | None = None,
    ) -> None:
        if logger is None:
            self._logger = structlog.get_logger(APP_NAME)
        else:
            self._logger = logger
        self._out_dir = out_dir
        self._precision = precision

    def grid(self, name: str, f: GridFunction) -> Path:
        return self._write(name, format_grid_csv(f, self._precision))

    def sequence(self, name: str, sequence: AASequence) -> Path:
        text = format_sequence_csv(sequence, self._precision)
        return self._write(name, text)

    def json(self, name: str, document: BaseModel | Mapping[str, Any]) -> Path:
        if isinstance(document, BaseModel):
            text = document.model_dump_json(indent=2)
        else:
            text = json.dumps(
                _plain(document), indent=2, sort_keys=True, allow_nan=False
            )
        return self._write(name, text + "\n")

    def table(
        self, name: str, columns: list[str], rows: Iterable[Iterable[Any]]
    ) -> Path:
        """Write a plain CSV table; floats use the configured precision."""
        lines = [",".join(columns)]
        for row in rows:
            fields = []
            for x in row:
                if isinstance(x, float):
                    fields.append(f"{x:.{self._precision}g}")
                elif isinstance(x, bool):
                    fields.append(str(x).lower())
                else:
                    fields.append(str(x))
            lines.append(",".join(fields))
        return self._write(name, "\n".join(lines) + "\n")

    def _write(self, name: str, text: str) -> Path:
        self._out_dir.mkdir(parents=True, exist_ok=True)
        path = self._out_dir / name
        path.write_text(text)
        self._logger.info("Wrote artifact", path=str(path), size=len(text))
        return path


def _plain(obj: Any) -> Any:
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    if isinstance(obj, Mapping):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj
