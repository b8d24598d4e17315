"""Oracle discriminator: exact class probabilities from model densities.

For data generated from p_real vs p_fake in equal proportion, the Bayes
classifier is D(x) = p_real(x) / (p_real(x) + p_fake(x)), so its log odds
against the real class are exactly

    log((1 - D)/D)(x) = log p_fake(x) - log p_real(x),

and the summed log odds over a dataset recover the log-likelihood ratio
exactly (up to probability clipping).  Only models exposing their row
log-density can provide this.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from clfmh.classifiers.base import ClassifierSpec, Discriminator
from clfmh.errors import OracleUnavailableError
from clfmh.models.base import Dataset, Model


@dataclass
class OracleDiscriminator(Discriminator):
    model: Model = None
    theta_fake: np.ndarray = None
    theta_real: np.ndarray = None

    def _log_odds_exact(self, features: np.ndarray) -> np.ndarray:
        data = Dataset(rows=features, layout=self.model.layout)
        return self.model.log_lik_rows(self.theta_fake, data) - self.model.log_lik_rows(
            self.theta_real, data
        )

    def _raw_proba(self, features: np.ndarray) -> np.ndarray:
        return expit(-self._log_odds_exact(features))

    def log_odds_fake(self, features: np.ndarray) -> np.ndarray:
        t = self._log_odds_exact(self._check_width(features))
        bound = np.log1p(-self.spec.eps_clip) - np.log(self.spec.eps_clip)
        return np.clip(t, -bound, bound)


def oracle_discriminator(
    model: Model,
    theta_fake: np.ndarray,
    theta_real: np.ndarray,
    spec: ClassifierSpec | None = None,
) -> OracleDiscriminator:
    """Exact discriminator between model densities at two parameter values.

    Operates on raw data rows (no feature transform).  Raises
    OracleUnavailableError for models without a tractable row density.
    """
    if not model.has_oracle:
        raise OracleUnavailableError(f"model {model.name!r} has no tractable density")
    if spec is None:
        spec = ClassifierSpec(kind="oracle")
    theta_fake = np.asarray(theta_fake, float)
    theta_real = np.asarray(theta_real, float)
    model.validate_theta(theta_fake)
    model.validate_theta(theta_real)
    return OracleDiscriminator(
        spec=spec,
        n_real=0,
        n_fake=0,
        width=model.T if model.layout == "series" else (2 * model.T if model.layout == "two_series" else 1),
        model=model,
        theta_fake=theta_fake,
        theta_real=theta_real,
    )
