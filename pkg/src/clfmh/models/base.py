"""Shared model types: datasets, latent sources, and the simulator interface.

Simulators are pure functions of ``(theta, latent)``.  A latent source is
either an explicit array of primitive draws (one fixed-length block per fake
observation) or, for simulators that consume a data-dependent amount of
randomness, a recorded stream identifier that is replayed on every call.
Either way ``simulate_given`` is deterministic, which is what lets a sampler
pin the fake-data generator for an entire chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from clfmh.errors import LatentError, OracleUnavailableError, SupportError
from clfmh.rng import RngStream


@dataclass(frozen=True)
class Dataset:
    """n observation rows of equal width p.

    layout is one of "scalar" (p = 1), "series" (one series of length p),
    "two_series" (two stacked series: columns [X_1..X_T, Y_1..Y_T]).
    """

    rows: np.ndarray
    layout: str = "scalar"

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        object.__setattr__(self, "rows", rows)
        if rows.ndim != 2 or rows.shape[0] < 1:
            raise ValueError(f"rows must be a nonempty 2-D array, got {rows.shape}")
        if self.layout not in ("scalar", "series", "two_series"):
            raise ValueError(f"unknown layout {self.layout!r}")
        if self.layout == "scalar" and rows.shape[1] != 1:
            raise ValueError("scalar layout needs width 1")
        if self.layout == "two_series" and rows.shape[1] % 2 != 0:
            raise ValueError("two_series layout needs even width")

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def width(self) -> int:
        return self.rows.shape[1]

    def column_names(self) -> list[str]:
        p = self.width
        if self.layout == "scalar":
            return ["x"]
        if self.layout == "series":
            return [f"x_{j + 1}" for j in range(p)]
        half = p // 2
        return [f"X_{j + 1}" for j in range(half)] + [f"Y_{j + 1}" for j in range(half)]


@dataclass(frozen=True)
class ArrayLatent:
    """Fixed-shape primitive draws, one block per fake observation."""

    arrays: dict[str, np.ndarray]
    m: int

    def require(self, name: str, shape: tuple) -> np.ndarray:
        try:
            arr = self.arrays[name]
        except KeyError:
            raise LatentError(f"latent source lacks array {name!r}")
        if arr.shape != shape:
            raise LatentError(f"latent {name!r} has shape {arr.shape}, need {shape}")
        return arr


@dataclass(frozen=True)
class SeedLatent:
    """Recorded stream identifier; replayed exactly on each simulate call."""

    descriptor: dict
    m: int

    def replay(self) -> RngStream:
        return RngStream.from_descriptor(self.descriptor)


class Model:
    """Simulator interface; subclasses set name, param_names, layout."""

    name: str = ""
    param_names: tuple[str, ...] = ()
    layout: str = "scalar"
    theta_true: np.ndarray
    has_oracle: bool = False
    discrete_coords: tuple[int, ...] = ()  # indices that take categorical values

    @property
    def dim(self) -> int:
        return len(self.param_names)

    # -- support ------------------------------------------------------------

    def in_support(self, theta: np.ndarray) -> bool:
        raise NotImplementedError

    def validate_theta(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.dim,):
            raise SupportError(
                f"{self.name}: theta must have shape ({self.dim},), got {theta.shape}"
            )
        if not np.all(np.isfinite(theta)) or not self.in_support(theta):
            raise SupportError(f"{self.name}: theta {theta} outside support")
        return theta

    # -- simulation ---------------------------------------------------------

    def draw_latent(self, m: int, stream: RngStream):
        raise NotImplementedError

    def simulate_given(self, theta, latent) -> Dataset:
        raise NotImplementedError

    def simulate(self, theta, m: int, stream: RngStream) -> Dataset:
        return self.simulate_given(theta, self.draw_latent(m, stream))

    # -- oracle density -----------------------------------------------------

    def log_lik_rows(self, theta, data: Dataset) -> np.ndarray:
        raise OracleUnavailableError(f"{self.name} has no analytic density")

    def log_lik(self, theta, data: Dataset) -> float:
        return float(np.sum(self.log_lik_rows(theta, data)))
