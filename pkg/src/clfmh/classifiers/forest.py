"""Random-forest discriminator (scikit-learn backend).

Defaults follow standard practice for probability forests: 500 trees,
sqrt(p) features per split, Gini impurity, bootstrap resampling, nodes
grown to single-observation leaves.  Class imbalance (n != m) is handled
through sample weights matching the shared training objective.  Predicted
probabilities are the forest's averaged per-tree class frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.ensemble import RandomForestClassifier

from clfmh.classifiers.base import ClassifierSpec, Discriminator, class_weights
from clfmh.rng import RngStream


@dataclass
class ForestDiscriminator(Discriminator):
    forest: RandomForestClassifier = None

    def _raw_proba(self, features: np.ndarray) -> np.ndarray:
        real_col = int(np.where(self.forest.classes_ == 1)[0][0])
        return self.forest.predict_proba(features)[:, real_col]


def fit_forest(
    spec: ClassifierSpec,
    real_features: np.ndarray,
    fake_features: np.ndarray,
    stream: RngStream,
) -> ForestDiscriminator:
    real_features = np.atleast_2d(np.asarray(real_features, float))
    fake_features = np.atleast_2d(np.asarray(fake_features, float))
    n, m = real_features.shape[0], fake_features.shape[0]
    x = np.vstack([real_features, fake_features])
    y = np.concatenate([np.ones(n, dtype=int), np.zeros(m, dtype=int)])
    forest = RandomForestClassifier(
        n_estimators=spec.n_trees,
        criterion="gini",
        max_features="sqrt",
        bootstrap=True,
        min_samples_leaf=1,
        random_state=int(stream.integers(0, 2**32)),
        n_jobs=1,
    )
    forest.fit(x, y, sample_weight=class_weights(n, m) * (n + m))
    return ForestDiscriminator(
        spec=spec, n_real=n, n_fake=m, width=x.shape[1], forest=forest
    )
