"""Chain and dataset summaries: means, credible intervals, ESS, Bayes factors."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from clfmh.features import series_summaries
from clfmh.models.base import Dataset
from clfmh.samplers.chains import Chain

_DEGENERATE_VAR = 1e-30


@dataclass(frozen=True)
class PosteriorSummary:
    param_names: tuple
    mean: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    ess: np.ndarray
    level: float
    accept_rate: float
    n_draws: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.any(self.lower > self.upper):
            raise ValueError("credible interval lower bounds exceed uppers")
        if np.any(self.ess < 0) or np.any(self.ess > self.n_draws):
            raise ValueError("ESS must lie in [0, n_draws]")

    def to_frame(self) -> pd.DataFrame:
        """One row per parameter: param, mean, l, u, ess, accept_rate."""
        return pd.DataFrame(
            {
                "param": list(self.param_names),
                "mean": self.mean,
                "l": self.lower,
                "u": self.upper,
                "ess": self.ess,
                "accept_rate": self.accept_rate,
            }
        )

    def to_csv(self, path) -> None:
        self.to_frame().to_csv(path, index=False)


def ess(draws: np.ndarray, burn_in: int = 0) -> float:
    """Effective sample size by the initial-monotone-sequence rule.

    Autocovariances are summed in adjacent pairs; the running pair sums are
    kept while positive and forced nonincreasing, and the series is cut at
    the first violation.  ESS = T / (1 + 2 * sum of kept correlations),
    capped at T.  A zero-variance (degenerate) coordinate reports 0.0 —
    the caller can treat ess == 0 as the degenerate flag.
    """
    x = np.asarray(draws, float)[burn_in:]
    t = x.shape[0]
    if t < 1:
        raise ValueError("no draws left after burn-in")
    x = x - x.mean()
    var = float(x @ x) / t
    if var < _DEGENERATE_VAR:
        return 0.0
    # autocovariances up to t-2 via FFT convolution
    nfft = 1 << (2 * t - 1).bit_length()
    f = np.fft.rfft(x, nfft)
    acov = np.fft.irfft(f * np.conj(f), nfft)[:t].real / t
    gamma = acov / acov[0]

    tau = gamma[0]  # = 1, the k=0 term
    prev = np.inf
    for j in range(1, (t - 1) // 2 + 1):
        pair = gamma[2 * j - 1] + gamma[2 * j]
        if pair <= 0.0:
            break
        pair = min(pair, prev)
        tau += 2.0 * pair
        prev = pair
    return float(min(t, t / tau))


def summarize(chain: Chain, burn_in: int = 0, level: float = 0.95) -> PosteriorSummary:
    """Per-coordinate posterior mean, equal-tailed CI, and ESS after burn-in."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    if burn_in < 0 or burn_in >= len(chain):
        raise ValueError(
            f"burn_in must be in [0, {len(chain) - 1}], got {burn_in}"
        )
    tail = chain.tail(burn_in)
    alpha = (1.0 - level) / 2.0
    draws = tail.draws
    return PosteriorSummary(
        param_names=chain.param_names,
        mean=draws.mean(axis=0),
        lower=np.quantile(draws, alpha, axis=0),
        upper=np.quantile(draws, 1.0 - alpha, axis=0),
        ess=np.array([ess(draws[:, j]) for j in range(draws.shape[1])]),
        level=level,
        accept_rate=tail.acceptance_rate,
        n_draws=len(tail),
        meta={"algorithm": chain.algorithm, "seed": chain.seed,
              "stream_id": chain.stream_id, "burn_in": burn_in},
    )


def summary_stats(data: Dataset, acf_lags=(1, 2)) -> np.ndarray:
    """Dataset-level summary vector: per-replicate series summaries, averaged.

    Each replicate contributes mean, log-variance (clamped), and the
    requested autocorrelations per series, plus the cross-correlation for
    paired series; the dataset vector is the average over replicates.
    """
    return series_summaries(data.rows, data.layout, acf_lags).mean(axis=0)


def bayes_factor(indicator_draws: np.ndarray) -> float:
    """freq(model 1) / freq(model 2) from posterior indicator draws.

    Draws must take values in {1, 2}.  If either model is absent the
    factor degenerates to inf (no model-2 draws) or 0.0 (no model-1
    draws), with a warning.
    """
    ind = np.asarray(indicator_draws, float).ravel()
    if ind.size == 0:
        raise ValueError("no draws")
    if not np.all(np.isin(ind, (1.0, 2.0))):
        bad = ind[~np.isin(ind, (1.0, 2.0))][:3]
        raise ValueError(f"indicator draws must be 1 or 2, got {bad}")
    n1 = float(np.sum(ind == 1.0))
    n2 = float(ind.size - n1)
    if n1 == 0.0 or n2 == 0.0:
        warnings.warn("one model has zero posterior frequency; Bayes factor degenerate")
        return np.inf if n2 == 0.0 else 0.0
    return n1 / n2
