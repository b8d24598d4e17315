"""Two-model Gaussian choice problem, theta = (model indicator, mu).

Model 1 draws N(mu, 1); model 2 draws N(mu, 1 + 3/sqrt(n_obs)) where n_obs
is the real-data sample size the experiment was designed for, making the
two models contiguous alternatives that are genuinely hard to tell apart.
"""

from __future__ import annotations

import numpy as np

from clfmh.models.base import ArrayLatent, Dataset, Model
from clfmh.rng import RngStream


class GaussChoiceModel(Model):
    name = "gauss_choice"
    param_names = ("model", "mu")
    layout = "scalar"
    has_oracle = True
    discrete_coords = (0,)

    def __init__(self, n_obs: int = 500):
        if n_obs < 1:
            raise ValueError(f"n_obs must be >= 1, got {n_obs}")
        self.n_obs = int(n_obs)
        self.theta_true = np.array([1.0, 0.0])

    def variance(self, indicator: float) -> float:
        return 1.0 if indicator == 1.0 else 1.0 + 3.0 / np.sqrt(self.n_obs)

    def in_support(self, theta) -> bool:
        return theta[0] in (1.0, 2.0)

    def draw_latent(self, m: int, stream: RngStream) -> ArrayLatent:
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        return ArrayLatent({"eps": stream.normal(size=m)}, m)

    def simulate_given(self, theta, latent: ArrayLatent) -> Dataset:
        theta = self.validate_theta(theta)
        eps = latent.require("eps", (latent.m,))
        x = theta[1] + np.sqrt(self.variance(theta[0])) * eps
        return Dataset(x[:, None], "scalar")

    def log_lik_rows(self, theta, data: Dataset) -> np.ndarray:
        theta = self.validate_theta(theta)
        v = self.variance(theta[0])
        x = data.rows[:, 0]
        return -0.5 * np.log(2.0 * np.pi * v) - (x - theta[1]) ** 2 / (2.0 * v)
