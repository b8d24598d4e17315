"""Single-hidden-layer neural-network discriminator.

Architecture: dense tanh hidden layer, sigmoid output.  Training is
full-batch gradient descent with classical momentum on the weighted
cross-entropy loss.  Inputs are z-scored internally (constant columns are
passed through unscaled); weights initialize as N(0, 1/fan_in) from the
caller's stream, biases at zero.  A fit whose final loss exceeds its
initial loss is treated as a failed fit and raises, so callers can map it
to a rejected step rather than trust a diverged discriminator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from clfmh.classifiers.base import ClassifierSpec, Discriminator, class_weights
from clfmh.rng import RngStream


@dataclass
class NeuralDiscriminator(Discriminator):
    mean: np.ndarray = None
    scale: np.ndarray = None
    w1: np.ndarray = None
    b1: np.ndarray = None
    w2: np.ndarray = None
    b2: float = 0.0
    loss_initial: float = 0.0
    loss_final: float = 0.0

    def _raw_proba(self, features: np.ndarray) -> np.ndarray:
        z = (features - self.mean) / self.scale
        hidden = np.tanh(z @ self.w1 + self.b1)
        return expit(hidden @ self.w2 + self.b2)


def _loss(p: np.ndarray, y: np.ndarray, v: np.ndarray, eps: float) -> float:
    p = np.clip(p, eps, 1.0 - eps)
    return -float(v @ (y * np.log(p) + (1.0 - y) * np.log1p(-p)))


def fit_neural(
    spec: ClassifierSpec,
    real_features: np.ndarray,
    fake_features: np.ndarray,
    stream: RngStream,
) -> NeuralDiscriminator:
    real_features = np.atleast_2d(np.asarray(real_features, float))
    fake_features = np.atleast_2d(np.asarray(fake_features, float))
    n, m = real_features.shape[0], fake_features.shape[0]
    x = np.vstack([real_features, fake_features])
    y = np.concatenate([np.ones(n), np.zeros(m)])
    v = class_weights(n, m)
    p_in, h = x.shape[1], spec.hidden

    mean = x.mean(axis=0)
    sd = x.std(axis=0)
    scale = np.where(sd > 1e-12, sd, 1.0)
    z = (x - mean) / scale

    w1 = stream.normal(size=(p_in, h)) / np.sqrt(p_in)
    b1 = np.zeros(h)
    w2 = stream.normal(size=h) / np.sqrt(h)
    b2 = 0.0
    vel = [np.zeros_like(w1), np.zeros_like(b1), np.zeros_like(w2), 0.0]

    loss_initial = loss_final = None
    for _ in range(spec.epochs):
        hidden = np.tanh(z @ w1 + b1)
        p = 1.0 / (1.0 + np.exp(-(hidden @ w2 + b2)))
        if loss_initial is None:
            loss_initial = _loss(p, y, v, spec.eps_clip)
        # gradient of the weighted cross-entropy wrt the output logit
        d_out = v * (p - y)
        g_w2 = hidden.T @ d_out
        g_b2 = float(d_out.sum())
        d_hidden = np.outer(d_out, w2) * (1.0 - hidden**2)
        g_w1 = z.T @ d_hidden
        g_b1 = d_hidden.sum(axis=0)
        mu, lr = spec.momentum, spec.learning_rate
        vel[0] = mu * vel[0] - lr * g_w1
        vel[1] = mu * vel[1] - lr * g_b1
        vel[2] = mu * vel[2] - lr * g_w2
        vel[3] = mu * vel[3] - lr * g_b2
        w1 += vel[0]
        b1 += vel[1]
        w2 += vel[2]
        b2 += vel[3]

    hidden = np.tanh(z @ w1 + b1)
    p = 1.0 / (1.0 + np.exp(-(hidden @ w2 + b2)))
    loss_final = _loss(p, y, v, spec.eps_clip)
    if loss_final > loss_initial:
        raise RuntimeError(
            f"neural discriminator diverged (loss {loss_initial:.6f} -> {loss_final:.6f})"
        )
    return NeuralDiscriminator(
        spec=spec,
        n_real=n,
        n_fake=m,
        width=p_in,
        mean=mean,
        scale=scale,
        w1=w1,
        b1=b1,
        w2=w2,
        b2=b2,
        loss_initial=loss_initial,
        loss_final=loss_final,
    )
