"""Normal location-scale model, theta = (mu, sigma2)."""

from __future__ import annotations

import numpy as np

from clfmh.models.base import ArrayLatent, Dataset, Model
from clfmh.rng import RngStream


class NormalLSModel(Model):
    name = "normal_ls"
    param_names = ("mu", "sigma2")
    layout = "scalar"
    has_oracle = True

    def __init__(self):
        self.theta_true = np.array([0.0, 1.0])

    def in_support(self, theta) -> bool:
        return theta[1] > 0.0

    def draw_latent(self, m: int, stream: RngStream) -> ArrayLatent:
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        return ArrayLatent({"eps": stream.normal(size=m)}, m)

    def simulate_given(self, theta, latent: ArrayLatent) -> Dataset:
        theta = self.validate_theta(theta)
        eps = latent.require("eps", (latent.m,))
        x = theta[0] + np.sqrt(theta[1]) * eps
        return Dataset(x[:, None], "scalar")

    def log_lik_rows(self, theta, data: Dataset) -> np.ndarray:
        theta = self.validate_theta(theta)
        mu, s2 = theta
        x = data.rows[:, 0]
        return -0.5 * np.log(2.0 * np.pi * s2) - (x - mu) ** 2 / (2.0 * s2)
