"""Square-root mean-reverting diffusion observed on a regular grid.

theta = (alpha, beta, sigma): dX_t = beta (alpha - X_t) dt + sigma sqrt(X_t) dW_t.
The transition over a step of length delta is exactly a scaled noncentral
chi-square,

    X_{t+delta} = c W,  W ~ ncx2(df, nc),
    c  = sigma^2 (1 - e^{-beta delta}) / (4 beta),
    df = 4 alpha beta / sigma^2,
    nc = X_t e^{-beta delta} / c,

which gives both an exact simulator and an exact likelihood.  Each dataset
row is one series of T observations after the fixed start x0; simulation
replays a recorded stream (the per-step chi-square draws consume a
data-dependent number of primitives, so there is no fixed-shape latent).
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy import stats

from clfmh.errors import SupportError
from clfmh.models.base import Dataset, Model, SeedLatent
from clfmh.rng import RngStream


class CIRModel(Model):
    name = "cir"
    param_names = ("alpha", "beta", "sigma")
    layout = "series"
    has_oracle = True

    def __init__(self, T: int = 500, delta: float = 1.0, x0: float = 0.1):
        if T < 1 or delta <= 0 or x0 <= 0:
            raise ValueError(f"need T >= 1, delta > 0, x0 > 0; got {T}, {delta}, {x0}")
        self.T = int(T)
        self.delta = float(delta)
        self.x0 = float(x0)
        self.theta_true = np.array([0.07, 0.15, 0.07])
        self._feller_warned = False

    def in_support(self, theta) -> bool:
        return bool(np.all(theta > 0.0))

    def validate_theta(self, theta) -> np.ndarray:
        theta = super().validate_theta(theta)
        alpha, beta, sigma = theta
        if 2.0 * alpha * beta < sigma**2 and not self._feller_warned:
            self._feller_warned = True  # warn once per instance, not per step
            warnings.warn(
                f"Feller condition 2*alpha*beta >= sigma^2 violated at {theta}",
                UserWarning,
                stacklevel=2,
            )
        return theta

    def _constants(self, theta):
        alpha, beta, sigma = theta
        decay = np.exp(-beta * self.delta)
        c = sigma**2 * (1.0 - decay) / (4.0 * beta)
        df = 4.0 * alpha * beta / sigma**2
        if not (np.isfinite(c) and c > 0.0 and np.isfinite(df) and df > 0.0):
            raise SupportError(f"cir: degenerate transition constants at {theta}")
        return decay, c, df

    def draw_latent(self, m: int, stream: RngStream) -> SeedLatent:
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        return SeedLatent(stream.child().descriptor(), m)

    def simulate_given(self, theta, latent: SeedLatent) -> Dataset:
        theta = self.validate_theta(theta)
        decay, c, df = self._constants(theta)
        gen = latent.replay()
        x = np.full(latent.m, self.x0)
        out = np.empty((latent.m, self.T))
        for t in range(self.T):
            x = c * gen.noncentral_chi2(df, x * decay / c)
            out[:, t] = x
        return Dataset(out, "series")

    def log_lik_rows(self, theta, data: Dataset) -> np.ndarray:
        theta = self.validate_theta(theta)
        if np.any(data.rows <= 0.0):
            raise SupportError("cir: data contains nonpositive values")
        decay, c, df = self._constants(theta)
        prev = np.concatenate(
            [np.full((data.n, 1), self.x0), data.rows[:, :-1]], axis=1
        )
        logpdf = stats.ncx2.logpdf(data.rows / c, df, prev * decay / c) - np.log(c)
        return logpdf.sum(axis=1)

    def transition_log_density(self, theta, x_from: float, x_to: float) -> float:
        """Exact one-step log density; the reference for bridge estimators."""
        theta = self.validate_theta(theta)
        decay, c, df = self._constants(theta)
        return float(stats.ncx2.logpdf(x_to / c, df, x_from * decay / c) - np.log(c))
