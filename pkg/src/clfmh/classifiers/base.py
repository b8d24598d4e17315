"""Discriminator interface and the shared real-vs-fake training objective.

Training maximizes the weighted cross-entropy objective

    J(D) = (1/n) sum_real log D(x) + (1/m) sum_fake log(1 - D(x)),

with labels real = 1, fake = 0.  Internally the optimizers minimize the
equivalent loss with per-row weights 1/(2n) and 1/(2m) (summing to one),
which reduces to the ordinary empirical loss when n = m.

All predicted probabilities are clipped into [eps_clip, 1 - eps_clip], so
one observation can contribute at most log((1-eps)/eps) to a log-likelihood
ratio, keeping perfectly separated fits finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from clfmh.errors import FeatureError


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str = "logistic_l1_cv"
    eps_clip: float = 1e-6
    # logistic_l1_cv
    n_lambdas: int = 50
    lambda_min_ratio: float = 1e-3
    cv_folds: int = 10
    lambdas: tuple | None = None  # explicit path, e.g. (0.0,) for a plain fit
    standardize: bool = True
    tol: float = 1e-7
    # random_forest
    n_trees: int = 500
    # neural_net
    hidden: int = 50
    epochs: int = 500
    learning_rate: float = 0.01
    momentum: float = 0.9

    def __post_init__(self):
        if self.kind not in ("logistic_l1_cv", "random_forest", "neural_net", "oracle"):
            raise ValueError(f"unknown classifier kind {self.kind!r}")
        if not 0.0 < self.eps_clip < 0.5:
            raise ValueError("eps_clip must lie in (0, 0.5)")
        for name in ("n_lambdas", "cv_folds", "n_trees", "hidden", "epochs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.learning_rate <= 0 or self.tol <= 0 or self.lambda_min_ratio <= 0:
            raise ValueError("learning_rate, tol, lambda_min_ratio must be > 0")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must lie in [0, 1)")
        if self.lambdas is not None:
            lambdas = tuple(float(l) for l in self.lambdas)
            if any(l < 0 for l in lambdas):
                raise ValueError("lambdas must be >= 0")
            object.__setattr__(self, "lambdas", lambdas)


@dataclass
class Discriminator:
    spec: ClassifierSpec
    n_real: int
    n_fake: int
    width: int

    def _check_width(self, features: np.ndarray) -> np.ndarray:
        features = np.atleast_2d(np.asarray(features, float))
        if features.shape[1] != self.width:
            raise FeatureError(
                f"feature width {features.shape[1]} != training width {self.width}"
            )
        return features

    def _raw_proba(self, features: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        """P(real | row), clipped into [eps_clip, 1 - eps_clip]."""
        p = self._raw_proba(self._check_width(features))
        eps = self.spec.eps_clip
        return np.clip(p, eps, 1.0 - eps)

    def log_odds_fake(self, features: np.ndarray) -> np.ndarray:
        """log((1 - D)/D) per row, the summand of the ratio estimator."""
        p = self.predict_proba(features)
        return np.log1p(-p) - np.log(p)


def class_weights(n: int, m: int) -> np.ndarray:
    """Row weights (1/(2n) real block, 1/(2m) fake block), summing to 1."""
    return np.concatenate([np.full(n, 0.5 / n), np.full(m, 0.5 / m)])


def cross_entropy_objective(
    d: Discriminator, real_features: np.ndarray, fake_features: np.ndarray
) -> float:
    """Weighted training objective J(D); higher is better."""
    p_real = d.predict_proba(real_features)
    p_fake = d.predict_proba(fake_features)
    return float(np.mean(np.log(p_real)) + np.mean(np.log1p(-p_fake)))
