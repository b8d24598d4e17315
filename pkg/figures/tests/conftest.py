"""Shared fixtures: one synthetic artifact of each CSV flavor."""

from __future__ import annotations

from pathlib import Path

import pytest

from _synthetic import make_chain_csv, make_slice1d_csv, make_slice2d_csv


@pytest.fixture
def chain_csv(tmp_path: Path) -> Path:
    return make_chain_csv(tmp_path / "chain0.csv")


@pytest.fixture
def slice1d_csv(tmp_path: Path) -> Path:
    return make_slice1d_csv(tmp_path / "slice_mu.csv")


@pytest.fixture
def slice2d_csv(tmp_path: Path) -> Path:
    return make_slice2d_csv(tmp_path / "slice_ab.csv")
