"""Quadratic-expansion diagnostics for the normal location-scale testbed.

The estimated log-likelihood curve theta -> sum_i log(p-hat_theta /
p-hat_theta0)(X_i), built from a logistic discriminator on features
(1, x, x^2), is compared against (a) the true log-likelihood curve and
(b) a quadratic in h = sqrt(n)(theta - theta0) whose curvature is pinned
to the Fisher information diag(1, 1/2) with only center and level free.
Theory says the estimated curve matches the quadratic's shape — same
curvature as the truth, possibly shifted center.

The report also carries the three differentiability curves for the
plug-in density estimate: the normalizing-constant drift
n(c_theta - c_theta0) computed from the closed-form Gaussian integral of
the fitted exponential-quadratic density, and the two centered
empirical-process terms (linear remainder and squared term) whose
uniform smallness the expansion requires.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from clfmh.classifiers import ClassifierSpec, fit
from clfmh.features import FeatureSpec, build_feature_pair
from clfmh.models.normal_ls import NormalLSModel
from clfmh.rng import RngStream

FISHER_INFO = np.diag([1.0, 0.5])  # N(mu, sigma2) information at (0, 1)
_QUAD_NODES = 80


def true_logistic_beta(mu: float, s2: float) -> np.ndarray:
    """Population coefficients of the (1, x, x^2) logistic discriminator
    separating N(0,1) rows (class 1) from N(mu, s2) rows (class 0)."""
    return np.array(
        [0.5 * np.log(s2) + mu**2 / (2.0 * s2), -mu / s2, 0.5 / s2 - 0.5]
    )


def normalizing_constant(beta: np.ndarray) -> float:
    """integral of phi(x) exp(-b0 - b1 x - b2 x^2) dx, in closed form.

    This is the total mass of the plug-in density the discriminator
    implies; it equals 1 exactly at the population coefficients.
    """
    denom = 1.0 + 2.0 * beta[2]
    if denom <= 0.0:
        raise ValueError(
            f"implied density is not integrable (1 + 2*b2 = {denom:.3g} <= 0)"
        )
    return float(np.exp(-beta[0] + 0.5 * beta[1] ** 2 / denom) / np.sqrt(denom))


def _score(x: np.ndarray, vary: str) -> np.ndarray:
    return x if vary == "mu" else (x**2 - 1.0) / 2.0


@dataclass(frozen=True)
class TheoryReport:
    vary: str                  # which coordinate the slice moves
    offsets: np.ndarray        # theta-space deviations from (0, 1)
    h: np.ndarray              # sqrt(n) * offsets
    estimated: np.ndarray      # classifier-based log-lik curve
    true_curve: np.ndarray     # exact log-lik curve
    quadratic: np.ndarray      # fixed-curvature quadratic fit to `estimated`
    max_abs_deviation: float   # sup |estimated - quadratic| over the grid
    curve_range: float         # peak-to-peak of `estimated`
    const_curve: np.ndarray        # n (c_theta - c_theta0)
    proj_linear_curve: np.ndarray  # centered linear-remainder term
    proj_quad_curve: np.ndarray    # centered squared term
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.allclose(self.offsets, -self.offsets[::-1], atol=1e-12):
            raise ValueError("offset grid must be symmetric about 0")
        for name in ("estimated", "true_curve", "quadratic", "const_curve",
                     "proj_linear_curve", "proj_quad_curve"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"{name} contains non-finite values")


def theory_check_normal(
    n: int,
    m: int,
    offsets: np.ndarray,
    stream: RngStream,
    vary: str = "mu",
    oracle: bool = False,
) -> TheoryReport:
    """Build the quadratic-expansion report along a one-coordinate slice.

    One real sample of size n and one shared fake-generator latent of size
    m are drawn; each grid point theta = theta0 + offset refits the
    discriminator against fake data pushed through the same latent.  With
    oracle=True the fitted coefficients are replaced by their population
    values, making the estimated curve equal the true one identically —
    the baseline that separates estimation error from theory error.
    """
    if vary not in ("mu", "sigma2"):
        raise ValueError(f"vary must be 'mu' or 'sigma2', got {vary!r}")
    offsets = np.asarray(offsets, float)
    if offsets.ndim != 1 or offsets.size < 3:
        raise ValueError("need a 1-D grid of at least 3 offsets")

    model = NormalLSModel()
    theta0 = model.theta_true
    real = model.simulate(theta0, n, stream.child())
    latent = model.draw_latent(m, stream.child())
    x = real.rows[:, 0]
    cspec = ClassifierSpec(kind="logistic_l1_cv", lambdas=(1e-9,))
    fspec = FeatureSpec(kind="poly2")

    def theta_at(offset: float) -> np.ndarray:
        return theta0 + (np.array([offset, 0.0]) if vary == "mu"
                         else np.array([0.0, offset]))

    def beta_at(theta: np.ndarray) -> np.ndarray:
        if oracle:
            return true_logistic_beta(theta[0], theta[1])
        fake = model.simulate_given(theta, latent)
        fr, ff = build_feature_pair(real.rows, fake.rows, fspec, model.layout)
        d = fit(cspec, fr, ff, stream.child())
        return np.concatenate(([d.intercept], d.coef))

    beta0 = beta_at(theta0)
    c0 = normalizing_constant(beta0)
    ll0 = model.log_lik(theta0, real)
    moments = np.array([n, x.sum(), (x**2).sum()], dtype=float)

    nodes, weights = np.polynomial.hermite_e.hermegauss(_QUAD_NODES)
    weights = weights / np.sqrt(2.0 * np.pi)  # E under N(0,1)

    n_grid = offsets.size
    estimated = np.empty(n_grid)
    true_curve = np.empty(n_grid)
    const_curve = np.empty(n_grid)
    proj_linear = np.empty(n_grid)
    proj_quad = np.empty(n_grid)
    for i, offset in enumerate(offsets):
        theta = theta_at(offset)
        beta = beta_at(theta)
        dbeta = beta - beta0
        estimated[i] = -float(dbeta @ moments)
        true_curve[i] = model.log_lik(theta, real) - ll0
        const_curve[i] = n * (normalizing_constant(beta) - c0)

        def sqrt_ratio(v: np.ndarray) -> np.ndarray:
            return np.exp(-0.5 * (dbeta[0] + dbeta[1] * v + dbeta[2] * v**2))

        lin_emp = sqrt_ratio(x) - 1.0 - offset * _score(x, vary) / 2.0
        lin_pop = weights @ (sqrt_ratio(nodes) - 1.0 - offset * _score(nodes, vary) / 2.0)
        proj_linear[i] = n * (lin_emp.mean() - lin_pop)
        sq_emp = (sqrt_ratio(x) - 1.0) ** 2
        sq_pop = weights @ (sqrt_ratio(nodes) - 1.0) ** 2
        proj_quad[i] = n * (sq_emp.mean() - sq_pop)

    h = np.sqrt(n) * offsets
    curv = FISHER_INFO[0, 0] if vary == "mu" else FISHER_INFO[1, 1]
    design = np.column_stack([h, np.ones_like(h)])
    slope, level = np.linalg.lstsq(design, estimated + 0.5 * curv * h**2, rcond=None)[0]
    quadratic = -0.5 * curv * h**2 + slope * h + level

    return TheoryReport(
        vary=vary,
        offsets=offsets,
        h=h,
        estimated=estimated,
        true_curve=true_curve,
        quadratic=quadratic,
        max_abs_deviation=float(np.max(np.abs(estimated - quadratic))),
        curve_range=float(np.ptp(estimated)),
        const_curve=const_curve,
        proj_linear_curve=proj_linear,
        proj_quad_curve=proj_quad,
        meta={"n": n, "m": m, "oracle": oracle,
              "quad_center": float(slope), "quad_level": float(level)},
    )
