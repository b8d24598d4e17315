"""Chain container and its on-disk CSV form.

One row per MCMC step t = 1..T, holding the state after the step, the
log-likelihood estimate bookkeeping, the state's log prior, and whether
the step's proposal was accepted.  For carried-denominator samplers the
log_lik_est column is the estimate attached to the current state; for the
two-fake-sample variant (which has no state estimate) it is the step's
estimated log-ratio, NaN where the proposal was rejected before
estimation.  meta["log_lik_semantics"] records which reading applies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd


@dataclass
class Chain:
    draws: np.ndarray
    log_lik_est: np.ndarray
    log_prior: np.ndarray
    accepted: np.ndarray
    param_names: tuple
    algorithm: str
    seed: int
    stream_id: int
    wallclock: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.draws = np.atleast_2d(np.asarray(self.draws, float))
        t = self.draws.shape[0]
        for name in ("log_lik_est", "log_prior", "accepted"):
            arr = np.asarray(getattr(self, name))
            if arr.shape != (t,):
                raise ValueError(f"{name} must have shape ({t},), got {arr.shape}")
        self.accepted = self.accepted.astype(bool)
        if self.draws.shape[1] != len(self.param_names):
            raise ValueError("param_names must match draw dimension")

    def __len__(self) -> int:
        return self.draws.shape[0]

    @property
    def acceptance_rate(self) -> float:
        return float(self.accepted.mean())

    def tail(self, burn_in: int) -> "Chain":
        """The chain after discarding the first burn_in steps."""
        if not 0 <= burn_in < len(self):
            raise ValueError(f"burn_in must be in [0, {len(self)}), got {burn_in}")
        return Chain(
            draws=self.draws[burn_in:].copy(),
            log_lik_est=self.log_lik_est[burn_in:].copy(),
            log_prior=self.log_prior[burn_in:].copy(),
            accepted=self.accepted[burn_in:].copy(),
            param_names=self.param_names,
            algorithm=self.algorithm,
            seed=self.seed,
            stream_id=self.stream_id,
            wallclock=self.wallclock,
            meta={**self.meta, "burn_in": burn_in},
        )

    def metadata(self) -> dict:
        """JSON-ready sidecar describing the run."""
        return {
            "algorithm": self.algorithm,
            "param_names": list(self.param_names),
            "length": len(self),
            "seed": self.seed,
            "stream_id": self.stream_id,
            "acceptance_rate": self.acceptance_rate,
            "wallclock_seconds": self.wallclock,
            **self.meta,
        }

    def to_csv(self, path) -> None:
        frame = pd.DataFrame(self.draws, columns=list(self.param_names))
        frame.insert(0, "iter", np.arange(1, len(self) + 1))
        frame["log_lik_est"] = self.log_lik_est
        frame["log_prior"] = self.log_prior
        frame["accepted"] = self.accepted.astype(int)
        frame.to_csv(path, index=False)

    @classmethod
    def from_csv(cls, path, algorithm: str = "", seed: int = 0, stream_id: int = 0) -> "Chain":
        frame = pd.read_csv(path)
        fixed = {"iter", "log_lik_est", "log_prior", "accepted"}
        params = tuple(c for c in frame.columns if c not in fixed)
        return cls(
            draws=frame[list(params)].to_numpy(),
            log_lik_est=frame["log_lik_est"].to_numpy(float),
            log_prior=frame["log_prior"].to_numpy(float),
            accepted=frame["accepted"].to_numpy(),
            param_names=params,
            algorithm=algorithm,
            seed=seed,
            stream_id=stream_id,
        )
