"""Feature maps turning dataset rows into classifier inputs.

Kinds:

raw
    The rows unchanged.
poly2
    Scalar rows x mapped to (x, x^2); the intercept belongs to the classifier.
summary
    Per-row series summaries: mean, log sample variance, lag-1/2
    autocorrelations for each series, plus the cross-correlation between the
    two series when the layout has two.  Degenerate (constant) series clamp
    the variance at 1e-12 and report autocorrelations and cross-correlations
    of 0 rather than erroring.
raw_plus_summary
    Raw columns, then the summaries, then projections onto the top
    principal components of the pooled real+fake rows.  The basis must be
    fit on the pooled matrix first (columns centered, no scaling, plain
    eigendecomposition of the covariance).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from clfmh.errors import FeatureError

VAR_CLAMP = 1e-12


@dataclass(frozen=True)
class FeatureSpec:
    kind: str = "raw"
    pca_components: int = 3
    acf_lags: tuple = (1, 2)

    def __post_init__(self):
        if self.kind not in ("raw", "poly2", "summary", "raw_plus_summary"):
            raise ValueError(f"unknown feature kind {self.kind!r}")
        if self.pca_components < 0:
            raise ValueError("pca_components must be >= 0")


@dataclass(frozen=True)
class PCABasis:
    center: np.ndarray
    components: np.ndarray  # (p, k), orthonormal columns

    def project(self, rows: np.ndarray) -> np.ndarray:
        if rows.shape[1] != self.center.shape[0]:
            raise FeatureError(
                f"rows have width {rows.shape[1]}, basis expects {self.center.shape[0]}"
            )
        return (rows - self.center) @ self.components


def fit_pca(pooled_rows: np.ndarray, k: int) -> PCABasis:
    """Top-k eigenvectors of the pooled covariance, sign-canonicalized."""
    pooled_rows = np.asarray(pooled_rows, float)
    n, p = pooled_rows.shape
    k = min(k, p)
    center = pooled_rows.mean(axis=0)
    z = pooled_rows - center
    cov = z.T @ z / max(n - 1, 1)
    eigval, eigvec = np.linalg.eigh(cov)
    order = np.argsort(eigval)[::-1][:k]
    comp = eigvec[:, order]
    # fix an arbitrary eigh sign so bases are reproducible across runs
    for j in range(comp.shape[1]):
        lead = np.argmax(np.abs(comp[:, j]))
        if comp[lead, j] < 0:
            comp[:, j] = -comp[:, j]
    return PCABasis(center, comp)


def _acf(series: np.ndarray, lag: int) -> float:
    t = series.shape[0]
    if lag >= t:
        return 0.0
    centered = series - series.mean()
    denom = float(centered @ centered)
    if denom < VAR_CLAMP:
        return 0.0
    return float(centered[:-lag] @ centered[lag:] / denom)


def _one_series_summary(series: np.ndarray, acf_lags) -> list[float]:
    var = series.var(ddof=1) if series.shape[0] > 1 else 0.0
    out = [float(series.mean()), float(np.log(max(var, VAR_CLAMP)))]
    out.extend(_acf(series, lag) for lag in acf_lags)
    return out


def _cross_corr(x: np.ndarray, y: np.ndarray) -> float:
    xc, yc = x - x.mean(), y - y.mean()
    denom = np.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom < VAR_CLAMP:
        return 0.0
    return float(xc @ yc / denom)


def series_summaries(rows: np.ndarray, layout: str, acf_lags=(1, 2)) -> np.ndarray:
    """Per-row summary block: 2 + len(lags) stats per series, + cross-corr."""
    rows = np.atleast_2d(np.asarray(rows, float))
    out = []
    for row in rows:
        if layout == "two_series":
            half = row.shape[0] // 2
            x, y = row[:half], row[half:]
            stats = _one_series_summary(x, acf_lags) + _one_series_summary(y, acf_lags)
            stats.append(_cross_corr(x, y))
        else:
            stats = _one_series_summary(row, acf_lags)
        out.append(stats)
    return np.asarray(out)


def build_features(
    rows: np.ndarray,
    spec: FeatureSpec,
    layout: str = "series",
    pca_basis: PCABasis | None = None,
) -> np.ndarray:
    rows = np.atleast_2d(np.asarray(rows, float))
    if rows.shape[0] < 1:
        raise FeatureError("empty feature input")
    if spec.kind == "raw":
        return rows.copy()
    if spec.kind == "poly2":
        if rows.shape[1] != 1:
            raise FeatureError(f"poly2 needs scalar rows, got width {rows.shape[1]}")
        x = rows[:, 0]
        return np.column_stack([x, x**2])
    if spec.kind == "summary":
        return series_summaries(rows, layout, spec.acf_lags)
    # raw_plus_summary
    if spec.pca_components > 0 and pca_basis is None:
        raise FeatureError("raw_plus_summary needs a pooled PCA basis")
    parts = [rows, series_summaries(rows, layout, spec.acf_lags)]
    if spec.pca_components > 0:
        parts.append(pca_basis.project(rows))
    return np.concatenate(parts, axis=1)


def build_feature_pair(
    real_rows: np.ndarray,
    fake_rows: np.ndarray,
    spec: FeatureSpec,
    layout: str = "series",
    return_basis: bool = False,
):
    """Features for real and fake rows under one (freshly fit) basis.

    With return_basis=True the fitted PCA basis (None for basis-free kinds)
    is returned as a third element so further matrices can be mapped into
    the same feature space.
    """
    real_rows = np.atleast_2d(np.asarray(real_rows, float))
    fake_rows = np.atleast_2d(np.asarray(fake_rows, float))
    if real_rows.shape[1] != fake_rows.shape[1]:
        raise FeatureError(
            f"real/fake width mismatch: {real_rows.shape[1]} vs {fake_rows.shape[1]}"
        )
    basis = None
    if spec.kind == "raw_plus_summary" and spec.pca_components > 0:
        basis = fit_pca(np.vstack([real_rows, fake_rows]), spec.pca_components)
    fr = build_features(real_rows, spec, layout, basis)
    ff = build_features(fake_rows, spec, layout, basis)
    if return_basis:
        return fr, ff, basis
    return fr, ff
