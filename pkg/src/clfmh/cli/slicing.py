"""Log-likelihood slices: eta on a parameter grid, oracle curve alongside.

A slice fixes every coordinate at the configured truth except the chosen
one or two, and at each grid point estimates the log-likelihood ratio
eta against the observed data with the configured classifier, plus the
exact log-likelihood where the model has one.  Explosive simulations
yield eta = -inf rather than aborting the grid.

The --force-half-d ablation replaces the fitted discriminator with the
constant D = 1/2, whose per-observation log odds vanish identically; the
resulting flat zero curve is the no-information baseline.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

from clfmh.errors import ExplosionError
from clfmh.likelihood import estimate
from clfmh.rng import make_stream

from clfmh.cli.config import ExperimentConfig
from clfmh.cli.runner import simulate_real

SLICE_STREAM_ID = 1000


def parse_grid(expr: str) -> np.ndarray:
    """'a:b:steps' -> linspace(a, b, steps)."""
    parts = expr.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid {expr!r} must look like start:stop:steps")
    lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 2:
        raise ValueError(f"grid {expr!r} needs at least 2 steps")
    if not hi > lo:
        raise ValueError(f"grid {expr!r} needs stop > start")
    return np.linspace(lo, hi, steps)


def run_slice(
    cfg: ExperimentConfig,
    params: list[str],
    grids: list[np.ndarray],
    force_half_d: bool = False,
) -> pd.DataFrame:
    """Eta (and oracle log-likelihood) over a 1- or 2-D parameter grid."""
    if len(params) != len(grids) or not 1 <= len(params) <= 2:
        raise ValueError("need one or two parameters, each with its own grid")
    model = cfg.build_model()
    names = list(model.param_names)
    for p in params:
        if p not in names:
            raise ValueError(
                f"param: unknown parameter {p!r} for {cfg.id} (choose from {', '.join(names)})"
            )
    if len(set(params)) != len(params):
        raise ValueError("param: slice parameters must be distinct")

    truth = cfg.theta_true(model)
    indices = [names.index(p) for p in params]
    if len(grids) == 1:
        points = grids[0][:, None]
    else:
        a, b = np.meshgrid(grids[0], grids[1], indexing="ij")
        points = np.column_stack([a.ravel(), b.ravel()])

    # The whole grid must be inside the model's support before any work.
    thetas = []
    for row in points:
        theta = truth.copy()
        theta[indices] = row
        try:
            thetas.append(model.validate_theta(theta))
        except Exception as exc:  # SupportError or shape problems
            raise ValueError(f"grid: point {row} outside support: {exc}") from exc

    real = simulate_real(cfg, model)
    cspec, fspec = cfg.classifier_spec(), cfg.feature_spec()
    root = make_stream(cfg.seed, SLICE_STREAM_ID)
    nrep = cfg.sampler["nrep"]

    etas = np.empty(len(thetas))
    oracle = np.full(len(thetas), np.nan)
    for i, theta in enumerate(thetas):
        sub = root.child()
        if force_half_d:
            etas[i] = 0.0  # constant D = 1/2 has zero log odds everywhere
        else:
            try:
                etas[i] = estimate(
                    model, theta, real, None, cfg.m, nrep, cspec, fspec, sub
                ).eta
            except ExplosionError:
                etas[i] = -np.inf
        if model.has_oracle:
            oracle[i] = model.log_lik(theta, real)

    frame = pd.DataFrame(points, columns=params)
    frame["eta"] = etas
    frame["oracle_log_lik"] = oracle
    return frame


def write_slice(frame: pd.DataFrame, out_csv) -> Path:
    out_csv = Path(out_csv)
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out_csv, index=False)
    return out_csv
