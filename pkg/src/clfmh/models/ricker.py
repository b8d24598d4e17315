"""Ricker population model with Poisson observations.

theta = (log_r, sigma2, phi).  The latent population follows

    log N_{t+1} = log_r + log N_t - N_t + sigma eps_{t+1},   N_0 = 1,

and the observation at each time is Poisson(phi N_t), drawn by inverse
transform from one uniform per time point.  Keeping exactly one uniform and
one normal per (observation, time) pair gives the latent source a fixed
shape, so a single latent block can be replayed across a whole chain.

The recursion is carried in log space: log N stays finite even when N
itself underflows to zero after a crash, and the observation layer then
degenerates to Poisson(0) = 0 counts.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from clfmh.models.base import ArrayLatent, Dataset, Model
from clfmh.rng import RngStream


def poisson_inverse_transform(u: np.ndarray, mean: np.ndarray) -> np.ndarray:
    """Quantile-function coupling of uniforms to Poisson counts."""
    return np.asarray(stats.poisson.ppf(u, mean), dtype=float)


class RickerModel(Model):
    name = "ricker"
    param_names = ("log_r", "sigma2", "phi")
    layout = "series"
    has_oracle = False

    def __init__(self, T: int = 20):
        if T < 1:
            raise ValueError(f"T must be >= 1, got {T}")
        self.T = int(T)
        self.theta_true = np.array([3.8, 1.0, 10.0])

    def in_support(self, theta) -> bool:
        return theta[1] >= 0.0 and theta[2] >= 0.0

    def draw_latent(self, m: int, stream: RngStream) -> ArrayLatent:
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        eps = stream.normal(size=(m, self.T))
        u = stream.uniform(size=(m, self.T))
        return ArrayLatent({"eps": eps, "u": u}, m)

    def latent_populations(self, theta, latent: ArrayLatent) -> np.ndarray:
        """N_{i,t} for t = 1..T given the latent normals."""
        theta = self.validate_theta(theta)
        log_r, sigma2, _ = theta
        eps = latent.require("eps", (latent.m, self.T))
        sig = np.sqrt(sigma2)
        pops = np.empty((latent.m, self.T))
        log_n = np.zeros(latent.m)  # N_0 = 1
        n = np.ones(latent.m)
        for t in range(self.T):
            log_n = log_r + log_n - n + sig * eps[:, t]
            n = np.exp(log_n)
            pops[:, t] = n
        return pops

    def simulate_given(self, theta, latent: ArrayLatent) -> Dataset:
        theta = self.validate_theta(theta)
        u = latent.require("u", (latent.m, self.T))
        pops = self.latent_populations(theta, latent)
        counts = poisson_inverse_transform(u, theta[2] * pops)
        return Dataset(counts, "series")
