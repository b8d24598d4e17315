"""Proposal kernels for Metropolis-Hastings.

propose(theta, stream) returns (theta_new, log_q_ratio) where

    log_q_ratio = log q(theta | theta_new) - log q(theta_new | theta)

is the correction entering the acceptance probability.  Symmetric kernels
report 0 exactly; asymmetric ones (log-scale random walk, mean-matched
gamma/inverse-gamma) supply the exact ratio.  Each kernel documents its
draw order so chains replay bit-exactly from a recorded stream.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from clfmh.rng import RngStream


class Proposal:
    kind: str = ""

    def propose(self, theta: np.ndarray, stream: RngStream):
        raise NotImplementedError


class GaussianRW(Proposal):
    """theta' = theta + scales * z, z ~ N(0, I).  Draws: one normal block."""

    kind = "gaussian_rw"

    def __init__(self, scales):
        self.scales = np.atleast_1d(np.asarray(scales, float))
        if np.any(self.scales <= 0):
            raise ValueError("scales must be > 0")

    def propose(self, theta, stream):
        theta = np.asarray(theta, float)
        return theta + self.scales * stream.normal(size=theta.shape[0]), 0.0


class LogGaussianRW(Proposal):
    """Random walk on log-coordinates of a positive parameter.

    theta' = theta * exp(scales * z); the density ratio picks up the
    Jacobian, log_q_ratio = sum_i log(theta'_i / theta_i).
    Draws: one normal block.
    """

    kind = "log_gaussian_rw"

    def __init__(self, scales):
        self.scales = np.atleast_1d(np.asarray(scales, float))
        if np.any(self.scales <= 0):
            raise ValueError("scales must be > 0")

    def propose(self, theta, stream):
        theta = np.asarray(theta, float)
        if np.any(theta <= 0):
            raise ValueError(f"log-scale walk needs positive theta, got {theta}")
        new = theta * np.exp(self.scales * stream.normal(size=theta.shape[0]))
        return new, float(np.sum(np.log(new) - np.log(theta)))


class UniformWindowBlocked(Proposal):
    """Blocked uniform windows for a 3-parameter diffusion (alpha, beta, sigma).

    With probability p_joint, both alpha and beta move by independent
    uniform(-w, w) perturbations; otherwise sigma moves alone.  Symmetric.
    Draws: one uniform for the block choice, then 2 (joint) or 1 (sigma)
    uniforms for the move.
    """

    kind = "uniform_window_blocked"

    def __init__(self, window_ab: float = 0.01, window_sigma: float = 0.01, p_joint: float = 2.0 / 3.0):
        if window_ab <= 0 or window_sigma <= 0 or not 0.0 < p_joint < 1.0:
            raise ValueError("need positive windows and p_joint in (0, 1)")
        self.window_ab = float(window_ab)
        self.window_sigma = float(window_sigma)
        self.p_joint = float(p_joint)

    def propose(self, theta, stream):
        theta = np.asarray(theta, float)
        if theta.shape != (3,):
            raise ValueError("blocked window proposal is for 3 parameters")
        new = theta.copy()
        if stream.uniform() < self.p_joint:
            new[:2] += (stream.uniform(size=2) * 2.0 - 1.0) * self.window_ab
        else:
            new[2] += (stream.uniform() * 2.0 - 1.0) * self.window_sigma
        return new, 0.0


class PerCoordMixed(Proposal):
    """Coordinate-wise kernel for (log_r, sigma2, phi).

    log_r moves by a symmetric normal step; sigma2 is proposed from an
    inverse-gamma and phi from a gamma, each moment-matched to mean = the
    current value and variance = 1/n_obs, with the exact density ratio.
    Draws: one normal, one inverse-gamma, one gamma.
    """

    kind = "per_coord_mixed"

    def __init__(self, n_obs: int):
        if n_obs < 1:
            raise ValueError("n_obs must be >= 1")
        self.n_obs = int(n_obs)
        self.var = 1.0 / self.n_obs

    def _invgamma_params(self, mean):
        a = 2.0 + mean**2 / self.var
        return a, mean * (a - 1.0)

    def _gamma_params(self, mean):
        shape = mean**2 / self.var
        return shape, self.var / mean

    def propose(self, theta, stream):
        theta = np.asarray(theta, float)
        if theta.shape != (3,):
            raise ValueError("per-coordinate mixed proposal is for 3 parameters")
        log_r, s2, phi = theta
        if s2 <= 0 or phi <= 0:
            raise ValueError(f"need positive sigma2 and phi, got {theta}")
        log_r_new = log_r + np.sqrt(self.var) * stream.normal()
        a_f, b_f = self._invgamma_params(s2)
        s2_new = stream.inverse_gamma(a_f, b_f)
        k_f, sc_f = self._gamma_params(phi)
        phi_new = stream.gamma(k_f, sc_f)

        a_r, b_r = self._invgamma_params(s2_new)
        k_r, sc_r = self._gamma_params(phi_new)
        log_ratio = (
            stats.invgamma.logpdf(s2, a_r, scale=b_r)
            - stats.invgamma.logpdf(s2_new, a_f, scale=b_f)
            + stats.gamma.logpdf(phi, k_r, scale=sc_r)
            - stats.gamma.logpdf(phi_new, k_f, scale=sc_f)
        )
        return np.array([log_r_new, s2_new, phi_new]), float(log_ratio)


class DiscreteFlipPlusRW(Proposal):
    """Model-choice kernel: flip the indicator or walk the location.

    With probability flip_prob the indicator toggles between 1 and 2 (mu
    unchanged); otherwise mu takes a normal step (indicator unchanged).
    Both move types are symmetric.  Draws: one uniform, plus one normal
    for the walk branch.
    """

    kind = "discrete_flip_plus_rw"

    def __init__(self, flip_prob: float = 0.5, scale: float = 0.1):
        if not 0.0 < flip_prob < 1.0 or scale <= 0:
            raise ValueError("need flip_prob in (0, 1) and scale > 0")
        self.flip_prob = float(flip_prob)
        self.scale = float(scale)

    def propose(self, theta, stream):
        theta = np.asarray(theta, float)
        if theta.shape != (2,):
            raise ValueError("flip-plus-walk proposal is for 2 parameters")
        new = theta.copy()
        if stream.uniform() < self.flip_prob:
            new[0] = 3.0 - new[0]
        else:
            new[1] += self.scale * stream.normal()
        return new, 0.0
