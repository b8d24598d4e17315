"""Structural checks for the two input CSV formats.

Chain CSVs carry one MCMC draw per row::

    iter, <param columns...>, log_lik_est, log_prior, accepted

Slice CSVs carry one grid point per row::

    <param columns...>, eta, oracle_log_lik

Everything between the fixed columns is a parameter column; a figure spec
names which of them to draw.  A mismatch raises :class:`SchemaError` whose
message diffs the expected columns against the file's actual header.
"""

from __future__ import annotations

from pathlib import Path

import pandas as pd

from .errors import SchemaError

CHAIN_COLUMNS = ("iter", "log_lik_est", "log_prior", "accepted")
SLICE_COLUMNS = ("eta", "oracle_log_lik")


def _read(path: Path) -> pd.DataFrame:
    try:
        return pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise SchemaError(f"{path}: not a readable CSV: {exc}") from exc


def _check(
    frame: pd.DataFrame,
    path: Path,
    role: str,
    required: tuple[str, ...],
    params: tuple[str, ...],
) -> pd.DataFrame:
    expected = list(required) + [p for p in params if p not in required]
    found = list(frame.columns)
    missing = [c for c in expected if c not in found]
    if missing:
        raise SchemaError(
            f"{path}: {role} schema mismatch\n"
            f"  expected columns: {', '.join(expected)}\n"
            f"  missing columns:  {', '.join(missing)}\n"
            f"  found columns:    {', '.join(found)}"
        )
    for param in params:
        if not pd.api.types.is_numeric_dtype(frame[param]):
            raise SchemaError(f"{path}: non-numeric values in column {param!r}")
    return frame


def load_chain(path: Path, params: tuple[str, ...]) -> pd.DataFrame:
    """Read a chain CSV, verifying the fixed columns and the requested params."""
    return _check(_read(path), path, "chain", CHAIN_COLUMNS, params)


def load_slice(path: Path, params: tuple[str, ...]) -> pd.DataFrame:
    """Read a slice CSV, verifying the fixed columns and the requested axes."""
    return _check(_read(path), path, "slice", SLICE_COLUMNS, params)
