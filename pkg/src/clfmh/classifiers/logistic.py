"""L1-penalized logistic regression with cross-validated penalty selection.

The solver is coordinate descent on the penalized weighted-least-squares
subproblem inside an IRLS outer loop, warm-started along a decreasing
lambda path.  The penalty applies to coefficients of internally
standardized columns (weighted mean zero, weighted variance one); reported
coefficients are mapped back to the original feature scale.  The intercept
is never penalized.

Lambda path: n_lambdas log-spaced values from lambda_max (the smallest
penalty that keeps every coefficient at zero) down to
lambda_max * lambda_min_ratio.  The penalty is selected by K-fold
stratified cross-validation minimizing held-out weighted deviance; folds
are drawn from the caller's random stream, so a fit is a pure function of
(data, spec, stream state).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.special import expit

from clfmh.classifiers.base import ClassifierSpec, Discriminator, class_weights
from clfmh.rng import RngStream

_P_CLAMP = 1e-5  # IRLS working-weight clamp on fitted probabilities
_MAX_IRLS = 50
_MAX_SWEEPS = 1000


@njit(cache=True)
def _cd_sweep(xs, w, r, beta, lam, active, xsq):
    """One full cycle of coordinate updates for the penalized WLS problem.

    Minimizes 0.5 * sum_i w_i * r_i^2 + lam * sum_j |beta_j| where the
    residual r_i = z_i - b0 - xs_i . beta is kept in sync in place.
    Returns the largest absolute coefficient change of the sweep.
    """
    n, p = xs.shape
    max_delta = 0.0
    for j in range(p):
        if not active[j]:
            continue
        bj = beta[j]
        num = bj * xsq[j]
        for i in range(n):
            num += w[i] * xs[i, j] * r[i]
        if num > lam:
            bnew = (num - lam) / xsq[j]
        elif num < -lam:
            bnew = (num + lam) / xsq[j]
        else:
            bnew = 0.0
        delta = bnew - bj
        if delta != 0.0:
            for i in range(n):
                r[i] -= xs[i, j] * delta
            beta[j] = bnew
            if abs(delta) > max_delta:
                max_delta = abs(delta)
    return max_delta


@njit(cache=True)
def _wls_objective(w, r, beta, lam):
    """Penalized WLS objective at the current residual/coefficients."""
    obj = 0.0
    for i in range(r.shape[0]):
        obj += 0.5 * w[i] * r[i] * r[i]
    for j in range(beta.shape[0]):
        obj += lam * abs(beta[j])
    return obj


@njit(cache=True)
def _wls_solve(xs, w, z, b0, beta, lam, tol, active):
    """Coordinate descent to tolerance on one IRLS subproblem; returns b0."""
    n = xs.shape[0]
    r = z - b0 - xs @ beta
    xsq = np.zeros(beta.shape[0])
    for j in range(beta.shape[0]):
        if active[j]:
            acc = 0.0
            for i in range(n):
                acc += w[i] * xs[i, j] * xs[i, j]
            xsq[j] = acc
    wsum = np.sum(w)
    for _ in range(_MAX_SWEEPS):
        shift = 0.0
        for i in range(n):
            shift += w[i] * r[i]
        shift /= wsum
        b0 += shift
        for i in range(n):
            r[i] -= shift
        max_delta = _cd_sweep(xs, w, r, beta, lam, active, xsq)
        if max(max_delta, abs(shift)) < tol:
            break
    return b0


@njit(cache=True)
def _irls_fit(xs, y, v, lam, b0, beta, tol, active):
    """Penalized logistic fit at one lambda, warm-started in place."""
    n = xs.shape[0]
    for _ in range(_MAX_IRLS):
        lin = b0 + xs @ beta
        w = np.empty(n)
        z = np.empty(n)
        for i in range(n):
            p = 1.0 / (1.0 + np.exp(-lin[i]))
            if p < _P_CLAMP:
                p = _P_CLAMP
            elif p > 1.0 - _P_CLAMP:
                p = 1.0 - _P_CLAMP
            pq = p * (1.0 - p)
            w[i] = v[i] * pq
            z[i] = lin[i] + (y[i] - p) / pq
        beta_old = beta.copy()
        b0_old = b0
        b0 = _wls_solve(xs, w, z, b0, beta, lam, tol, active)
        delta = abs(b0 - b0_old)
        for j in range(beta.shape[0]):
            d = abs(beta[j] - beta_old[j])
            if d > delta:
                delta = d
        if delta < tol:
            break
    return b0


@njit(cache=True)
def _path_fit(xs, y, v, lambdas, tol, active):
    """Warm-started fits along a decreasing lambda path."""
    k = lambdas.shape[0]
    p = xs.shape[1]
    b0s = np.zeros(k)
    betas = np.zeros((k, p))
    beta = np.zeros(p)
    b0 = 0.0
    for idx in range(k):
        b0 = _irls_fit(xs, y, v, lambdas[idx], b0, beta, tol, active)
        b0s[idx] = b0
        betas[idx] = beta
    return b0s, betas


@dataclass
class LogisticDiscriminator(Discriminator):
    intercept: float = 0.0
    coef: np.ndarray = None
    lambda_path: np.ndarray = None
    lambda_selected: float = 0.0
    cv_deviance: np.ndarray = None
    kkt_residual: float = 0.0

    def _raw_proba(self, features):
        return expit(self.intercept + features @ self.coef)


def _standardize(x: np.ndarray, v: np.ndarray, enabled: bool):
    """Weighted standardization; constant columns are frozen out of the fit."""
    p = x.shape[1]
    if not enabled:
        mean = np.zeros(p)
        scale = np.ones(p)
        active = np.ones(p, dtype=np.bool_)
        for j in range(p):
            if np.ptp(x[:, j]) == 0.0:
                active[j] = False
        return (x - mean) / scale, mean, scale, active
    mean = v @ x
    var = v @ (x - mean) ** 2
    active = var > 1e-24
    scale = np.where(active, np.sqrt(np.maximum(var, 1e-24)), 1.0)
    return (x - mean) / scale, mean, scale, active


def _lambda_max(xs: np.ndarray, y: np.ndarray, v: np.ndarray, active: np.ndarray) -> float:
    """Smallest penalty that keeps all penalized coefficients at zero."""
    ybar = float(v @ y)
    grad = np.abs((v * (y - ybar)) @ xs)
    grad[~active] = 0.0
    return float(grad.max()) if grad.size else 0.0


def _weighted_deviance(b0, beta, xs, y, v, eps):
    p = np.clip(expit(b0 + xs @ beta), eps, 1.0 - eps)
    return -2.0 * float(v @ (y * np.log(p) + (1.0 - y) * np.log1p(-p)))


def _stratified_folds(n: int, m: int, folds: int, stream: RngStream):
    """Deal permuted real and fake indices round-robin into folds."""
    real = stream.permutation(n)
    fake = n + stream.permutation(m)
    assignment = np.empty(n + m, dtype=np.int64)
    assignment[real] = np.arange(n) % folds
    assignment[fake] = np.arange(m) % folds
    return assignment


def _kkt_residual(xs, y, v, b0, beta, lam, active):
    """Max violation of the subgradient optimality conditions."""
    p = expit(b0 + xs @ beta)
    grad = (v * (p - y)) @ xs
    resid = abs(float(v @ (p - y)))  # unpenalized intercept
    for j in range(beta.shape[0]):
        if not active[j]:
            continue
        if beta[j] == 0.0:
            resid = max(resid, max(abs(grad[j]) - lam, 0.0))
        else:
            resid = max(resid, abs(grad[j] + lam * np.sign(beta[j])))
    return resid


def fit_logistic(
    spec: ClassifierSpec,
    real_features: np.ndarray,
    fake_features: np.ndarray,
    stream: RngStream,
) -> LogisticDiscriminator:
    real_features = np.atleast_2d(np.asarray(real_features, float))
    fake_features = np.atleast_2d(np.asarray(fake_features, float))
    n, m = real_features.shape[0], fake_features.shape[0]
    x = np.vstack([real_features, fake_features])
    y = np.concatenate([np.ones(n), np.zeros(m)])
    v = class_weights(n, m)

    xs, mean, scale, active = _standardize(x, v, spec.standardize)

    if spec.lambdas is not None:
        lambdas = np.asarray(sorted(spec.lambdas, reverse=True), float)
    else:
        lam_max = _lambda_max(xs, y, v, active)
        if lam_max <= 0.0:
            lambdas = np.array([0.0])
        else:
            lambdas = np.geomspace(lam_max, lam_max * spec.lambda_min_ratio, spec.n_lambdas)

    b0s, betas = _path_fit(xs, y, v, lambdas, spec.tol, active)

    cv_dev = None
    if len(lambdas) == 1:
        pick = 0
    else:
        folds = min(spec.cv_folds, n, m)
        assignment = _stratified_folds(n, m, folds, stream)
        cv_dev = np.zeros(len(lambdas))
        for f in range(folds):
            train = assignment != f
            held = ~train
            fb0s, fbetas = _path_fit(xs[train], y[train], v[train], lambdas, spec.tol, active)
            for k in range(len(lambdas)):
                cv_dev[k] += _weighted_deviance(
                    fb0s[k], fbetas[k], xs[held], y[held], v[held], spec.eps_clip
                )
        pick = int(np.argmin(cv_dev))  # ties resolve to the larger penalty

    b0, beta = b0s[pick], betas[pick]
    kkt = _kkt_residual(xs, y, v, b0, beta, lambdas[pick], active)

    coef = beta / scale
    intercept = b0 - float(coef @ mean)
    return LogisticDiscriminator(
        spec=spec,
        n_real=n,
        n_fake=m,
        width=x.shape[1],
        intercept=float(intercept),
        coef=coef,
        lambda_path=lambdas,
        lambda_selected=float(lambdas[pick]),
        cv_deviance=cv_dev,
        kkt_residual=float(kkt),
    )
