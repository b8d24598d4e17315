"""Binary discriminators for real-vs-simulated classification.

`fit(spec, real_features, fake_features, stream)` trains the classifier
named by the spec and returns a Discriminator exposing clipped
probabilities and per-row log odds.  The oracle discriminator is not
trained from features; build it with `oracle_discriminator` instead.
"""

from __future__ import annotations

import numpy as np

from clfmh.classifiers.base import (
    ClassifierSpec,
    Discriminator,
    class_weights,
    cross_entropy_objective,
)
from clfmh.classifiers.forest import ForestDiscriminator, fit_forest
from clfmh.classifiers.logistic import LogisticDiscriminator, fit_logistic
from clfmh.classifiers.neural import NeuralDiscriminator, fit_neural
from clfmh.classifiers.oracle import OracleDiscriminator, oracle_discriminator
from clfmh.errors import FeatureError
from clfmh.rng import RngStream

_FITTERS = {
    "logistic_l1_cv": fit_logistic,
    "random_forest": fit_forest,
    "neural_net": fit_neural,
}

__all__ = [
    "ClassifierSpec",
    "Discriminator",
    "ForestDiscriminator",
    "LogisticDiscriminator",
    "NeuralDiscriminator",
    "OracleDiscriminator",
    "class_weights",
    "cross_entropy_objective",
    "fit",
    "oracle_discriminator",
]


def fit(
    spec: ClassifierSpec,
    real_features: np.ndarray,
    fake_features: np.ndarray,
    stream: RngStream,
) -> Discriminator:
    """Train a discriminator labeling real rows 1 and simulated rows 0."""
    if spec.kind == "oracle":
        raise ValueError("the oracle is density-based; use oracle_discriminator()")
    real_features = np.atleast_2d(np.asarray(real_features, float))
    fake_features = np.atleast_2d(np.asarray(fake_features, float))
    if real_features.shape[1] != fake_features.shape[1]:
        raise FeatureError(
            f"feature widths differ: real {real_features.shape[1]}, "
            f"fake {fake_features.shape[1]}"
        )
    if real_features.shape[0] < 2 or fake_features.shape[0] < 2:
        raise ValueError("training requires at least two rows of each class")
    if not (np.isfinite(real_features).all() and np.isfinite(fake_features).all()):
        raise ValueError("training features must be finite")
    return _FITTERS[spec.kind](spec, real_features, fake_features, stream)
