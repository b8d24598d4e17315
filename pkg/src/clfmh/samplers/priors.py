"""Priors over model parameters.

A prior exposes a log density up to an additive constant (-inf off
support), a properness flag, and — for proper priors only — exact sampling
from the caller's stream.  Improper priors are usable inside MH ratios but
are refused by rejection sampling (there is nothing to draw from).
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from clfmh.rng import RngStream


class Prior:
    kind: str = ""
    proper: bool = False
    dim: int = 0

    def log_density(self, theta) -> float:
        raise NotImplementedError

    def in_support(self, theta) -> bool:
        return self.log_density(theta) > -np.inf

    def sample(self, stream: RngStream) -> np.ndarray:
        if not self.proper:
            raise ValueError(f"cannot sample from improper prior {self.kind!r}")
        raise NotImplementedError

    def _check(self, theta) -> np.ndarray:
        theta = np.asarray(theta, float)
        if theta.shape != (self.dim,):
            raise ValueError(f"theta must have shape ({self.dim},), got {theta.shape}")
        return theta


class UniformBox(Prior):
    """Proper uniform prior on a product of closed intervals."""

    kind = "uniform_box"
    proper = True

    def __init__(self, lows, highs):
        self.lows = np.asarray(lows, float)
        self.highs = np.asarray(highs, float)
        if self.lows.shape != self.highs.shape or self.lows.ndim != 1:
            raise ValueError("lows and highs must be 1-D of equal length")
        if np.any(self.highs <= self.lows):
            raise ValueError("need highs > lows")
        self.dim = len(self.lows)
        self._log_volume = float(np.sum(np.log(self.highs - self.lows)))

    def log_density(self, theta) -> float:
        theta = self._check(theta)
        if np.all(theta >= self.lows) and np.all(theta <= self.highs):
            return -self._log_volume
        return -np.inf

    def sample(self, stream: RngStream) -> np.ndarray:
        return self.lows + stream.uniform(size=self.dim) * (self.highs - self.lows)


class CIRImproper(Prior):
    """Improper reference prior 1_(0,1)(alpha) 1_(beta>0) sigma^{-1}."""

    kind = "cir_improper"
    proper = False
    dim = 3

    def log_density(self, theta) -> float:
        alpha, beta, sigma = self._check(theta)
        if 0.0 < alpha < 1.0 and beta > 0.0 and sigma > 0.0:
            return -float(np.log(sigma))
        return -np.inf


class FlatImproper(Prior):
    """Improper flat prior, optionally bounded below per coordinate."""

    kind = "flat_improper"
    proper = False

    def __init__(self, dim: int, lows=None):
        self.dim = int(dim)
        self.lows = np.full(dim, -np.inf) if lows is None else np.asarray(lows, float)
        if self.lows.shape != (self.dim,):
            raise ValueError("lows must match dim")

    def log_density(self, theta) -> float:
        theta = self._check(theta)
        return 0.0 if np.all(theta >= self.lows) else -np.inf


class NormalInverseGamma(Prior):
    """Conjugate prior for (mu, sigma2): sigma2 ~ InvGamma(a, b),
    mu | sigma2 ~ N(mu0, sigma2 / lam)."""

    kind = "normal_inverse_gamma"
    proper = True
    dim = 2

    def __init__(self, mu0: float = 0.0, lam: float = 1.0, a: float = 2.0, b: float = 1.0):
        if lam <= 0 or a <= 0 or b <= 0:
            raise ValueError("need lam, a, b > 0")
        self.mu0, self.lam, self.a, self.b = float(mu0), float(lam), float(a), float(b)

    def log_density(self, theta) -> float:
        mu, s2 = self._check(theta)
        if s2 <= 0.0:
            return -np.inf
        return float(
            stats.invgamma.logpdf(s2, self.a, scale=self.b)
            + stats.norm.logpdf(mu, self.mu0, np.sqrt(s2 / self.lam))
        )

    def sample(self, stream: RngStream) -> np.ndarray:
        s2 = stream.inverse_gamma(self.a, self.b)
        mu = self.mu0 + np.sqrt(s2 / self.lam) * stream.normal()
        return np.array([mu, s2])


class ModelChoicePrior(Prior):
    """Uniform over two model indicators, standard normal location."""

    kind = "model_choice"
    proper = True
    dim = 2

    def log_density(self, theta) -> float:
        ind, mu = self._check(theta)
        if ind not in (1.0, 2.0):
            return -np.inf
        return float(np.log(0.5) + stats.norm.logpdf(mu))

    def sample(self, stream: RngStream) -> np.ndarray:
        ind = 1.0 + float(stream.integers(0, 2))
        return np.array([ind, stream.normal()])


def default_prior(model_name: str) -> Prior:
    """The prior each testbed is analyzed under."""
    if model_name == "normal_ls":
        return NormalInverseGamma(0.0, 1.0, 2.0, 1.0)
    if model_name == "cir":
        return CIRImproper()
    if model_name == "lotka_volterra":
        return UniformBox([0.0, 0.0, 0.0, 0.0], [0.1, 1.0, 2.0, 0.1])
    if model_name == "ricker":
        return FlatImproper(3, lows=[-np.inf, 0.0, 0.0])
    if model_name == "gauss_choice":
        return ModelChoicePrior()
    raise ValueError(f"no default prior for model {model_name!r}")
