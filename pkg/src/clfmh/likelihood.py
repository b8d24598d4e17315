"""Classification-based log-likelihood-ratio estimation and references.

The central quantity is

    eta = sum_i log((1 - D(x_i)) / D(x_i))

over the real observations, where D is a discriminator trained to tell
real data from data simulated at a candidate parameter.  For the exact
(oracle) discriminator between the two densities, eta equals the
log-likelihood ratio log p_theta(X) - log p_theta0(X) identically, so a
Metropolis-Hastings chain driven by eta targets the true posterior; with
an estimated discriminator, eta is a plug-in estimate of the same ratio.

This module also carries two non-classification references for comparison
samplers: a Modified-Brownian-Bridge importance estimator of the
square-root-diffusion transition density (for Monte-Carlo-within-
Metropolis) and a latent-path-averaged Poisson likelihood for the Ricker
model (for pseudo-marginal chains).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp
from scipy.stats import poisson

from clfmh.classifiers import ClassifierSpec, Discriminator, fit
from clfmh.errors import SupportError
from clfmh.features import FeatureSpec, build_feature_pair
from clfmh.models.base import ArrayLatent, Dataset, Model
from clfmh.models.ricker import RickerModel
from clfmh.rng import RngStream


@dataclass(frozen=True)
class LogLikEstimate:
    """Replicate-averaged eta at one parameter value.

    eta is the arithmetic mean of per_rep in ascending replicate order;
    mode records the latent provenance ("fixed" reuses one supplied latent
    block for every replicate, "random" draws a fresh child stream each).
    """

    eta: float
    nrep: int
    per_rep: np.ndarray
    theta: np.ndarray
    mode: str

    def __post_init__(self):
        if len(self.per_rep) != self.nrep:
            raise ValueError("per_rep length must equal nrep")


@dataclass(frozen=True)
class ResidualDiagnostic:
    """Gap between estimated and oracle log-likelihood ratios.

    u_theta uses a single fitted discriminator; u_theta_avg, when present,
    is the Monte Carlo average of u_theta over fresh fake-data replicates.
    """

    u_theta: float
    theta: np.ndarray
    n: int
    m: int
    u_theta_avg: float | None = None


def log_lik_ratio(d: Discriminator, real_features: np.ndarray) -> float:
    """Summed per-observation log odds against the real class.

    Each term is clipped through the discriminator's probability band, so
    the total is bounded by n * log((1 - eps_clip)/eps_clip).
    """
    return float(np.sum(d.log_odds_fake(real_features)))


def estimate(
    model: Model,
    theta,
    real: Dataset,
    latent,
    m: int,
    nrep: int,
    cspec: ClassifierSpec,
    fspec: FeatureSpec,
    stream: RngStream,
) -> LogLikEstimate:
    """Simulate, discriminate, and average eta over nrep replicates.

    With a supplied latent block the same fake-data generator input is
    reused for every replicate (classifier-fit randomness still comes from
    the stream); with latent=None each replicate simulates from a fresh
    child stream.  Simulation failures (e.g. population explosions)
    propagate to the caller, which treats the parameter as having eta of
    negative infinity.
    """
    theta = model.validate_theta(theta)
    if nrep < 1:
        raise ValueError(f"nrep must be >= 1, got {nrep}")
    if latent is not None and latent.m != m:
        raise ValueError(f"latent holds {latent.m} blocks but m = {m}")
    per_rep = np.empty(nrep)
    for r in range(nrep):
        if latent is None:
            fake = model.simulate(theta, m, stream.child())
        else:
            fake = model.simulate_given(theta, latent)
        fr, ff = build_feature_pair(real.rows, fake.rows, fspec, model.layout)
        d = fit(cspec, fr, ff, stream.child())
        per_rep[r] = log_lik_ratio(d, fr)
    return LogLikEstimate(
        eta=float(per_rep.mean()),
        nrep=nrep,
        per_rep=per_rep,
        theta=theta,
        mode="fixed" if latent is not None else "random",
    )


def posterior_residual(
    model: Model,
    theta,
    theta0,
    d: Discriminator,
    real: Dataset,
    real_features: np.ndarray | None = None,
) -> ResidualDiagnostic:
    """Per-observation gap between fitted and oracle discriminators.

        u_theta = sum_i [ log((1 - D_hat)/(1 - D_or)) - log(D_hat/D_or) ]

    evaluated at the real observations, which rearranges to
    eta(D_hat) - eta(D_oracle).  The fitted discriminator is evaluated on
    real_features (the exact matrix it was trained against; defaults to the
    raw rows), the oracle always on the raw rows.
    """
    from clfmh.classifiers import oracle_discriminator

    theta = model.validate_theta(theta)
    if real_features is None:
        real_features = real.rows
    oracle = oracle_discriminator(model, theta, theta0, spec=d.spec)
    p_hat = d.predict_proba(real_features)
    p_or = oracle.predict_proba(real.rows)
    u = np.log1p(-p_hat) - np.log1p(-p_or) - (np.log(p_hat) - np.log(p_or))
    return ResidualDiagnostic(
        u_theta=float(u.sum()),
        theta=theta,
        n=real.n,
        m=d.n_fake,
    )


def average_posterior_residual(
    model: Model,
    theta,
    theta0,
    real: Dataset,
    m: int,
    nrep: int,
    cspec: ClassifierSpec,
    fspec: FeatureSpec,
    stream: RngStream,
) -> ResidualDiagnostic:
    """Monte Carlo average of the residual over fresh fake-data replicates."""
    theta = model.validate_theta(theta)
    values = np.empty(nrep)
    for r in range(nrep):
        fake = model.simulate(theta, m, stream.child())
        fr, ff = build_feature_pair(real.rows, fake.rows, fspec, model.layout)
        d = fit(cspec, fr, ff, stream.child())
        values[r] = posterior_residual(model, theta, theta0, d, real, fr).u_theta
    return ResidualDiagnostic(
        u_theta=float(values[0]),
        theta=theta,
        n=real.n,
        m=m,
        u_theta_avg=float(values.mean()),
    )


def _norm_logpdf(x, mean, var):
    return -0.5 * np.log(2.0 * np.pi * var) - (x - mean) ** 2 / (2.0 * var)


def mcwm_log_lik(
    cir_data: Dataset,
    theta,
    M: int,
    N: int,
    stream: RngStream,
    delta: float = 1.0,
    x0: float = 0.1,
) -> float:
    """Bridge-importance estimate of the square-root-diffusion log-likelihood.

    Each observed transition x_from -> x_to over a step delta is estimated
    by N discretized paths on an M-point Euler grid (h = delta/M).  Paths
    are proposed from a Modified Brownian Bridge pinned at both ends: from
    state u_m with s = M - m grid steps remaining, the next state is

        N( u_m + (x_to - u_m)/s,  sigma^2 h u_m (s - 1)/s ),

    and the estimate of the transition density is the average over paths of
    (product of Euler transition densities) / (product of bridge proposal
    densities), accumulated with log-sum-exp.

    A path that steps to a nonpositive value leaves the diffusion's support
    and contributes zero weight; if all N paths of some transition die, that
    transition's log-density is -inf and the caller should reject theta.

    Bridge innovations are drawn as one block stream.normal(size=(M-1, N,
    n_transitions)), step-major, transitions ordered observation-major;
    replaying the same stream state reproduces the estimate exactly.
    """
    theta = np.asarray(theta, float)
    if theta.shape != (3,) or not np.all(np.isfinite(theta)):
        raise SupportError(f"mcwm: theta must be 3 finite values, got {theta}")
    alpha, beta, sigma = theta
    if beta <= 0.0 or sigma <= 0.0:
        raise SupportError(f"mcwm: need beta > 0 and sigma > 0, got {theta}")
    if M < 2 or N < 1:
        raise ValueError(f"need M >= 2 and N >= 1, got M={M}, N={N}")
    rows = cir_data.rows
    if np.any(rows <= 0.0):
        raise SupportError("mcwm: data contains nonpositive values")

    h = delta / M
    x_from = np.column_stack([np.full(rows.shape[0], x0), rows[:, :-1]]).ravel()
    x_to = np.tile(rows.ravel(), (N, 1))
    n_trans = x_from.shape[0]

    z = stream.normal(size=(M - 1, N, n_trans))
    u = np.broadcast_to(x_from, (N, n_trans)).copy()
    alive = np.ones((N, n_trans), dtype=bool)
    log_ratio = np.zeros((N, n_trans))
    for m in range(M - 1):
        s = M - m
        mean_bridge = u + (x_to - u) / s
        var_bridge = sigma**2 * h * u * (s - 1) / s
        u_next = mean_bridge + np.sqrt(var_bridge) * z[m]
        log_ratio -= _norm_logpdf(u_next, mean_bridge, var_bridge)
        log_ratio += _norm_logpdf(u_next, u + beta * (alpha - u) * h, sigma**2 * u * h)
        alive &= u_next > 0.0
        u = np.where(alive, u_next, 1.0)  # placeholder keeps dead-path math finite
    log_ratio += _norm_logpdf(x_to, u + beta * (alpha - u) * h, sigma**2 * u * h)
    log_ratio = np.where(alive, log_ratio, -np.inf)

    with np.errstate(divide="ignore"):  # all-dead transitions give log(0)
        per_transition = logsumexp(log_ratio, axis=0) - np.log(N)
    return float(per_transition.sum())


def ricker_pm_log_lik(data: Dataset, theta, K: int, stream: RngStream) -> float:
    """Latent-path average of the Ricker conditional Poisson likelihood.

    For each observed series, K fresh latent population paths are drawn and
    the conditional likelihoods prod_t Poisson(X_t; phi N_t) are averaged
    (via log-sum-exp), giving an unbiased estimate of the integrated
    likelihood whose log is summed over observations.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    model = RickerModel(T=data.width)
    theta = model.validate_theta(theta)
    n = data.n
    eps = stream.normal(size=(n * K, data.width))
    pops = model.latent_populations(theta, ArrayLatent({"eps": eps}, n * K))
    mean = theta[2] * pops.reshape(n, K, data.width)
    path_log_lik = poisson.logpmf(data.rows[:, None, :], mean).sum(axis=2)
    per_obs = logsumexp(path_log_lik, axis=1) - np.log(K)
    return float(per_obs.sum())
