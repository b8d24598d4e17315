"""Metropolis-Hastings kernels sharing one stream-aligned step protocol.

Every kernel consumes randomness identically: from the chain's root stream
(seed, stream_id), the first child is reserved for setup randomness (the
shared fake-data latent in fixed-generator mode; discarded otherwise), the
second initializes the state's estimate, and each step takes one further
child, split four ways — proposal draw, accept-or-reject uniform,
estimation (simulation + classifier training), and denominator refresh
(used by the double-refresh kernel).  Because the proposal and decision
substreams sit at the same positions in every kernel, two kernels that
compute the same acceptance ratios make the same decisions step for step,
which is what makes the oracle-equivalence check meaningful.

The accept-or-reject uniform is drawn lazily (only when 0 < rho < 1);
proposals rejected on prior support consume nothing beyond the proposal
draw.  Rejected steps never touch the fixed-mode latent, which is
immutable by construction.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from clfmh.classifiers import ClassifierSpec, fit, oracle_discriminator
from clfmh.errors import ExplosionError, OracleUnavailableError
from clfmh.features import FeatureSpec, build_feature_pair, build_features
from clfmh.likelihood import estimate, log_lik_ratio, mcwm_log_lik, ricker_pm_log_lik
from clfmh.models.base import Dataset, Model
from clfmh.rng import RngStream, make_stream
from clfmh.samplers.chains import Chain
from clfmh.samplers.priors import Prior
from clfmh.samplers.proposals import Proposal

MHC_MODES = ("fixed", "random", "two_sample")


@dataclass(frozen=True)
class ChainConfig:
    T: int
    init: np.ndarray
    seed: int
    stream_id: int = 0
    m: int = 0
    nrep: int = 1

    def __post_init__(self):
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")
        if self.nrep < 1:
            raise ValueError(f"nrep must be >= 1, got {self.nrep}")
        object.__setattr__(self, "init", np.asarray(self.init, float))


def accept_prob(
    log_lik_new: float,
    log_lik_old: float,
    log_prior_new: float,
    log_prior_old: float,
    log_q_ratio: float,
) -> float:
    """min{exp(delta log-lik + delta log-prior + log q-ratio), 1}.

    Inputs must be finite or -inf; -inf anywhere in the new state forces 0,
    an impossible current state forces 1.
    """
    values = (log_lik_new, log_lik_old, log_prior_new, log_prior_old, log_q_ratio)
    for v in values:
        if np.isnan(v) or v == np.inf:
            raise ValueError(f"acceptance inputs must be finite or -inf, got {values}")
    if log_lik_new == -np.inf or log_prior_new == -np.inf or log_q_ratio == -np.inf:
        return 0.0
    if log_lik_old + log_prior_old == -np.inf:
        return 1.0
    delta = (
        (log_lik_new - log_lik_old)
        + (log_prior_new - log_prior_old)
        + log_q_ratio
    )
    return 1.0 if delta >= 0.0 else float(np.exp(delta))


def _drive(
    model: Model,
    prior: Prior,
    proposal: Proposal,
    cfg: ChainConfig,
    root: RngStream,
    init_stream: RngStream,
    algorithm: str,
    meta: dict,
    value_at=None,
    ratio_at=None,
    refresh_current: bool = False,
) -> Chain:
    """Shared MH loop.

    Callers create root = make_stream(seed, stream_id) and consume exactly
    two children (setup, init) before handing it over; init_stream is that
    second child.  value_at(theta, stream) yields the state's log-likelihood
    estimate (carried as the denominator until the state changes; with
    refresh_current it is re-estimated every step from the fourth
    substream).  ratio_at(theta, theta', stream) instead yields a direct
    log-ratio estimate for kernels with no per-state value.
    """
    if (value_at is None) == (ratio_at is None):
        raise ValueError("exactly one of value_at/ratio_at is required")
    theta = model.validate_theta(cfg.init)
    lp = prior.log_density(theta)
    if lp == -np.inf:
        raise ValueError(f"init {theta} outside prior support")
    ll = value_at(theta, init_stream) if value_at else np.nan

    dim = model.dim
    draws = np.empty((cfg.T, dim))
    ll_col = np.empty(cfg.T)
    lp_col = np.empty(cfg.T)
    acc = np.zeros(cfg.T, dtype=bool)

    start = time.perf_counter()
    for t in range(cfg.T):
        sub = root.child().split(4)  # proposal, accept-u, estimation, refresh
        theta_new, log_q_ratio = proposal.propose(theta, sub[0])
        lp_new = prior.log_density(theta_new)
        step_stat = np.nan
        if lp_new > -np.inf:
            failed = False
            try:
                if value_at is not None:
                    ll_new = value_at(theta_new, sub[2])
                else:
                    step_stat = ratio_at(theta, theta_new, sub[2])
            except ExplosionError:
                ll_new = -np.inf
                step_stat = -np.inf
            except OracleUnavailableError:
                raise  # configuration bug, not a transient fit failure
            except RuntimeError as err:
                warnings.warn(
                    f"{algorithm}: estimator failed at step {t + 1} "
                    f"({err}); proposal rejected",
                    stacklevel=2,
                )
                failed = True
            if not failed:
                if refresh_current:
                    ll = value_at(theta, sub[3])
                if value_at is not None:
                    rho = accept_prob(ll_new, ll, lp_new, lp, log_q_ratio)
                else:
                    rho = accept_prob(step_stat, 0.0, lp_new, lp, log_q_ratio)
                if rho >= 1.0 or (rho > 0.0 and sub[1].uniform() < rho):
                    theta, lp, acc[t] = theta_new, lp_new, True
                    if value_at is not None:
                        ll = ll_new
        draws[t] = theta
        ll_col[t] = ll if value_at is not None else step_stat
        lp_col[t] = lp

    return Chain(
        draws=draws,
        log_lik_est=ll_col,
        log_prior=lp_col,
        accepted=acc,
        param_names=model.param_names,
        algorithm=algorithm,
        seed=cfg.seed,
        stream_id=cfg.stream_id,
        wallclock=time.perf_counter() - start,
        meta={
            "model": model.name,
            "T": cfg.T,
            "init": list(map(float, cfg.init)),
            "proposal": proposal.kind,
            "prior": prior.kind,
            "discrete_coords": list(model.discrete_coords),
            "log_lik_semantics": "state" if value_at is not None else "step_ratio",
            **meta,
        },
    )


def _oracle_eta(model: Model, real: Dataset, reference: np.ndarray):
    """Plug-in eta using exact densities against a fixed reference point."""

    def value_at(theta, stream):
        d = oracle_discriminator(model, theta, reference)
        return log_lik_ratio(d, real.rows)

    return value_at


def run_exact_mh(
    model: Model,
    real: Dataset,
    prior: Prior,
    proposal: Proposal,
    cfg: ChainConfig,
) -> Chain:
    """Reference sampler using the model's exact log-likelihood."""
    if not model.has_oracle:
        raise ValueError(f"model {model.name!r} has no exact likelihood")
    root = make_stream(cfg.seed, cfg.stream_id)
    root.child()  # reserved (latent slot in generator-based kernels)
    init_stream = root.child()

    def value_at(theta, stream):
        return model.log_lik(theta, real)

    return _drive(
        model, prior, proposal, cfg, root, init_stream,
        algorithm="exact_mh", meta={"n": real.n}, value_at=value_at,
    )


def run_mhc(
    mode: str,
    model: Model,
    real: Dataset,
    prior: Prior,
    proposal: Proposal,
    cspec: ClassifierSpec,
    fspec: FeatureSpec,
    cfg: ChainConfig,
) -> Chain:
    """Classification-driven MH.

    fixed: one latent block is drawn up front and reused at every step, so
    the map theta -> fake data is deterministic for the whole chain.
    random: fake data is refreshed from a fresh child stream per step; the
    refresh proposal is independent of the current latent state, so its
    ratio cancels and the current state's eta is carried until replaced.
    two_sample: each step trains a discriminator between fake data at the
    current and proposed parameters and evaluates its summed log odds at
    the real observations — a direct ratio estimate with no carried state
    and no real-data rows in the training set.

    The oracle classifier kind substitutes exact densities for training
    (requires raw features) and is the hinge of the equivalence check
    against run_exact_mh.
    """
    if mode not in MHC_MODES:
        raise ValueError(f"mode must be one of {MHC_MODES}, got {mode!r}")
    if cfg.m < 1:
        raise ValueError("cfg.m (fake sample size) must be >= 1")
    if cspec.kind == "oracle" and fspec.kind != "raw":
        raise ValueError("the oracle classifier consumes raw rows only")

    root = make_stream(cfg.seed, cfg.stream_id)
    setup_stream = root.child()
    init_stream = root.child()
    meta = {"mode": mode, "n": real.n, "m": cfg.m, "nrep": cfg.nrep,
            "classifier": cspec.kind, "features": fspec.kind}

    if mode in ("fixed", "random"):
        latent = model.draw_latent(cfg.m, setup_stream) if mode == "fixed" else None

        if cspec.kind == "oracle":
            value_at = _oracle_eta(model, real, model.theta_true)
        else:

            def value_at(theta, stream):
                return estimate(
                    model, theta, real, latent, cfg.m, cfg.nrep, cspec, fspec, stream
                ).eta

        return _drive(
            model, prior, proposal, cfg, root, init_stream,
            algorithm=f"mhc_{mode}", meta=meta, value_at=value_at,
        )

    # two_sample
    if cspec.kind == "oracle":

        def ratio_at(theta_cur, theta_prop, stream):
            d = oracle_discriminator(model, theta_prop, theta_cur)
            return log_lik_ratio(d, real.rows)

    else:

        def ratio_at(theta_cur, theta_prop, stream):
            values = np.empty(cfg.nrep)
            for r in range(cfg.nrep):
                fake_cur = model.simulate(theta_cur, cfg.m, stream.child())
                fake_prop = model.simulate(theta_prop, cfg.m, stream.child())
                f_cur, f_prop, basis = build_feature_pair(
                    fake_cur.rows, fake_prop.rows, fspec, model.layout,
                    return_basis=True,
                )
                d = fit(cspec, f_cur, f_prop, stream.child())
                f_real = build_features(real.rows, fspec, model.layout, basis)
                values[r] = float(np.sum(d.log_odds_fake(f_real)))
            return float(values.mean())

    return _drive(
        model, prior, proposal, cfg, root, init_stream,
        algorithm="mhc_two_sample", meta=meta, ratio_at=ratio_at,
    )


def run_mcwm(
    model,
    real: Dataset,
    prior: Prior,
    proposal: Proposal,
    M: int,
    cfg: ChainConfig,
    N: int | None = None,
) -> Chain:
    """Monte-Carlo-within-Metropolis with the bridge transition estimator.

    Both the proposal's and the current state's log-likelihoods are
    re-estimated with fresh randomness at every step (an inexact kernel by
    construction).  N defaults to M^2.
    """
    if N is None:
        N = M * M
    if not hasattr(model, "transition_log_density"):
        raise ValueError(
            f"the bridge estimator needs a diffusion model with transition "
            f"densities; got {model.name!r}"
        )
    root = make_stream(cfg.seed, cfg.stream_id)
    root.child()  # reserved
    init_stream = root.child()

    def value_at(theta, stream):
        return mcwm_log_lik(real, theta, M, N, stream, model.delta, model.x0)

    return _drive(
        model, prior, proposal, cfg, root, init_stream,
        algorithm="mcwm", meta={"n": real.n, "M": M, "N": N},
        value_at=value_at, refresh_current=True,
    )


def run_ricker_mcwm(
    model,
    real: Dataset,
    prior: Prior,
    proposal: Proposal,
    K: int,
    cfg: ChainConfig,
) -> Chain:
    """Monte-Carlo-within-Metropolis with the latent-path average estimator.

    The log-likelihood of each state is the K-path average of conditional
    Poisson likelihoods, re-estimated with fresh latent paths at every
    step for both the proposal and the current state.  Specific to the
    Poisson-observation latent growth chain.
    """
    if model.name != "ricker":
        raise ValueError(
            f"the latent-path average estimator assumes Poisson observations "
            f"of a latent growth chain; got {model.name!r}"
        )
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    root = make_stream(cfg.seed, cfg.stream_id)
    root.child()  # reserved
    init_stream = root.child()

    def value_at(theta, stream):
        return ricker_pm_log_lik(real, theta, K, stream)

    return _drive(
        model, prior, proposal, cfg, root, init_stream,
        algorithm="mcwm", meta={"n": real.n, "K": K},
        value_at=value_at, refresh_current=True,
    )


def debias(chain1: Chain, chain2: Chain) -> Chain:
    """Shift chain1's draws so their mean equals chain2's.

        out(t) = chain1(t) - mean(chain1) + mean(chain2)

    preserves chain1's centered sample exactly while correcting its
    location with chain2's.  Undefined for chains with discrete
    coordinates (a shifted indicator is meaningless).
    """
    if len(chain1) != len(chain2):
        raise ValueError("chains must have equal length")
    if chain1.param_names != chain2.param_names:
        raise ValueError("chains must share parameters")
    for c in (chain1, chain2):
        if c.meta.get("discrete_coords"):
            raise ValueError("de-biasing is undefined for discrete coordinates")
    shift = chain2.draws.mean(axis=0) - chain1.draws.mean(axis=0)
    n = len(chain1)
    return Chain(
        draws=chain1.draws + shift,
        log_lik_est=np.full(n, np.nan),
        log_prior=np.full(n, np.nan),
        accepted=chain1.accepted.copy(),
        param_names=chain1.param_names,
        algorithm=f"debias({chain1.algorithm},{chain2.algorithm})",
        seed=chain1.seed,
        stream_id=chain1.stream_id,
        wallclock=chain1.wallclock + chain2.wallclock,
        meta={
            "shift": list(map(float, shift)),
            "source_algorithms": [chain1.algorithm, chain2.algorithm],
        },
    )
