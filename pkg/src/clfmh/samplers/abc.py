"""Rejection sampling on summary-statistic distances.

Draw parameters from the prior, simulate a dataset for each, and keep the
r draws whose summaries land closest to the observed data's.  Distances
are Euclidean after per-summary standardization, with the scale constants
taken from a 200-draw pilot so that no single summary dominates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from clfmh.errors import ExplosionError
from clfmh.features import series_summaries
from clfmh.models.base import Dataset, Model
from clfmh.rng import make_stream
from clfmh.samplers.priors import Prior

SUMMARY_KINDS = ("summary", "sum")
_PILOT_DRAWS = 200


@dataclass(frozen=True)
class ABCResult:
    draws: np.ndarray            # (M, dim) every prior draw
    distances: np.ndarray        # (M,) standardized distance; inf if exploded
    accepted: np.ndarray         # (r, dim) smallest-distance draws
    accepted_distances: np.ndarray  # (r,) ascending
    standardization: np.ndarray  # per-summary scale from the pilot
    param_names: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.accepted_distances.shape[0] != self.accepted.shape[0]:
            raise ValueError("accepted draws and distances disagree in length")
        if np.any(np.diff(self.accepted_distances) < 0):
            raise ValueError("accepted distances must ascend")
        if np.any(self.accepted_distances < 0):
            raise ValueError("distances must be nonnegative")


def dataset_summary(data: Dataset, kind: str) -> np.ndarray:
    """Single summary vector for a whole dataset.

    'summary' averages the per-row series summaries (mean, sd,
    autocorrelations, cross-correlation where applicable) over the
    dataset's replicates; 'sum' is the one-dimensional total of all
    values.
    """
    if kind == "summary":
        return series_summaries(data.rows, data.layout).mean(axis=0)
    if kind == "sum":
        return np.array([float(np.sum(data.rows))])
    raise ValueError(f"summary kind must be one of {SUMMARY_KINDS}, got {kind!r}")


def run_abc(
    model: Model,
    prior: Prior,
    real: Dataset,
    summary_kind: str,
    m_draws: int,
    r: int,
    seed: int,
    stream_id: int = 0,
    m: int | None = None,
) -> ABCResult:
    """Keep the r of m_draws prior draws closest to the data in summary space.

    m is the number of replicates simulated per draw (defaults to the
    observed dataset's). Draws whose simulation explodes get infinite
    distance. The prior must be proper — there is nothing to draw from
    otherwise.
    """
    if not prior.proper:
        raise ValueError("rejection sampling requires a proper prior")
    if summary_kind not in SUMMARY_KINDS:
        raise ValueError(f"summary kind must be one of {SUMMARY_KINDS}, got {summary_kind!r}")
    if not 1 <= r <= m_draws:
        raise ValueError(f"need 1 <= r <= m_draws, got r={r}, m_draws={m_draws}")
    if m is None:
        m = real.n
    real_summary = dataset_summary(real, summary_kind)

    root = make_stream(seed, stream_id)
    pilot_stream = root.child()
    main_stream = root.child()

    pilot = []
    for _ in range(_PILOT_DRAWS):
        s = pilot_stream.child()
        theta = prior.sample(s)
        try:
            sim = model.simulate(theta, m, s)
        except ExplosionError:
            continue
        pilot.append(dataset_summary(sim, summary_kind))
    if len(pilot) < 2:
        raise RuntimeError(
            "pilot produced fewer than two usable simulations; "
            "cannot standardize distances"
        )
    scale = np.asarray(pilot).std(axis=0, ddof=1)
    scale = np.where(scale > 1e-12, scale, 1.0)

    dim = model.dim
    draws = np.empty((m_draws, dim))
    distances = np.empty(m_draws)
    for j in range(m_draws):
        s = main_stream.child()
        theta = prior.sample(s)
        draws[j] = theta
        try:
            sim = model.simulate(theta, m, s)
        except ExplosionError:
            distances[j] = np.inf
            continue
        z = (dataset_summary(sim, summary_kind) - real_summary) / scale
        distances[j] = float(np.sqrt(np.sum(z * z)))

    order = np.argsort(distances, kind="stable")[:r]
    return ABCResult(
        draws=draws,
        distances=distances,
        accepted=draws[order],
        accepted_distances=distances[order],
        standardization=scale,
        param_names=model.param_names,
        meta={
            "model": model.name,
            "summary_kind": summary_kind,
            "m_draws": m_draws,
            "r": r,
            "m": m,
            "seed": seed,
            "stream_id": stream_id,
            "n_exploded": int(np.sum(np.isinf(distances))),
        },
    )
