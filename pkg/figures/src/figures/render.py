"""Renderers for the five figure kinds.

All kinds share the same contract: inputs are read-only, smoothing uses
Silverman's bandwidth rule, and the pinned style makes re-renders
byte-stable.  ``build_figure`` returns the matplotlib Figure for callers
that want to inspect or embed it; ``render`` saves it to the spec's
output path.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd
from scipy.stats import gaussian_kde

from . import style
from .errors import SchemaError
from .schema import load_chain, load_slice
from .spec import FigureSpec

import matplotlib  # noqa: E402

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402


# ---------------------------------------------------------------------------
# shared helpers


def _chain_frames(spec: FigureSpec) -> list[tuple[str, pd.DataFrame]]:
    frames = []
    for inp in spec.inputs:
        frame = load_chain(inp.path, spec.params)
        if spec.burn_in >= len(frame):
            raise SchemaError(
                f"{inp.path}: burn_in {spec.burn_in} leaves no rows "
                f"(chain has {len(frame)})"
            )
        frames.append((inp.label, frame.iloc[spec.burn_in :]))
    return frames


def _panels(n: int) -> tuple[Figure, list]:
    fig, axes = plt.subplots(n, 1, squeeze=False, figsize=(6.4, 2.6 * n))
    return fig, [ax for (ax,) in axes]


def _truth_vline(ax, spec: FigureSpec, param: str) -> None:
    if param in spec.truth:
        ax.axvline(spec.truth[param], color="black", linestyle="--", label="truth")


# ---------------------------------------------------------------------------
# chain kinds


def _trace(spec: FigureSpec) -> Figure:
    frames = _chain_frames(spec)
    fig, axes = _panels(len(spec.params))
    for ax, param in zip(axes, spec.params):
        for i, (label, frame) in enumerate(frames):
            ax.plot(frame["iter"], frame[param], linewidth=0.8, color=f"C{i}", label=label)
        if param in spec.truth:
            ax.axhline(spec.truth[param], color="black", linestyle="--", label="truth")
        ax.set_ylabel(param)
    axes[-1].set_xlabel("iteration")
    axes[0].legend(loc="upper right", fontsize=8)
    return fig


def _density_overlay(spec: FigureSpec) -> Figure:
    frames = _chain_frames(spec)
    fig, axes = _panels(len(spec.params))
    for ax, param in zip(axes, spec.params):
        values = [frame[param].to_numpy(float) for _, frame in frames]
        pooled = np.concatenate(values)
        spread = np.ptp(pooled)
        pad = 0.1 * spread if spread > 0 else 1.0
        grid = np.linspace(pooled.min() - pad, pooled.max() + pad, 512)
        for i, ((label, _), x) in enumerate(zip(frames, values)):
            if np.ptp(x) == 0:  # degenerate sample: a point mass, not a curve
                ax.axvline(x[0], color=f"C{i}", label=label)
                continue
            density = gaussian_kde(x, bw_method="silverman")
            ax.plot(grid, density(grid), color=f"C{i}", label=label)
        _truth_vline(ax, spec, param)
        ax.set_xlabel(param)
        ax.set_ylabel("density")
    axes[0].legend(loc="upper right", fontsize=8)
    return fig


def _histogram_ci(spec: FigureSpec) -> Figure:
    ((_, frame),) = _chain_frames(spec)
    fig, axes = _panels(len(spec.params))
    for ax, param in zip(axes, spec.params):
        x = frame[param].to_numpy(float)
        ax.hist(x, bins=40, density=True, color="C0", alpha=0.7)
        lower, upper = np.quantile(x, [0.025, 0.975])
        ax.axvline(lower, color="C1", linestyle="--", label="95% interval")
        ax.axvline(upper, color="C1", linestyle="--", label="_nolegend_")
        _truth_vline(ax, spec, param)
        ax.set_xlabel(param)
        ax.set_ylabel("density")
    axes[0].legend(loc="upper right", fontsize=8)
    return fig


# ---------------------------------------------------------------------------
# slice kinds


def _shift_to_zero_max(values: np.ndarray) -> np.ndarray:
    """Shift a log-scale curve so its finite maximum sits at zero.

    Log-likelihoods and estimated log-ratios differ by data-dependent
    constants; removing each curve's own level makes their shapes
    comparable on one axis.  Non-finite entries become NaN gaps.
    """
    finite = np.isfinite(values)
    if not finite.any():
        raise SchemaError("curve has no finite values to plot")
    shifted = values - values[finite].max()
    return np.where(finite, shifted, np.nan)


def _slice_curve(spec: FigureSpec) -> Figure:
    (inp,) = spec.inputs
    axis = spec.params[0]
    frame = load_slice(inp.path, spec.params).sort_values(axis, kind="stable")
    x = frame[axis].to_numpy(float)
    eta = frame["eta"].to_numpy(float)
    oracle = frame["oracle_log_lik"].to_numpy(float)

    fig, (ax,) = _panels(1)
    ax.plot(x, _shift_to_zero_max(eta), color="C0", marker="o", markersize=3,
            label="classifier estimate")
    if np.isfinite(oracle).any():
        ax.plot(x, _shift_to_zero_max(oracle), color="C1", linestyle="--",
                label="exact log-likelihood")
    _truth_vline(ax, spec, axis)
    ax.set_xlabel(axis)
    ax.set_ylabel("log level (max = 0)")
    ax.legend(loc="lower center", fontsize=8)
    return fig


def pivot_slice(
    frame: pd.DataFrame, x: str, y: str
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Arrange a 2-D slice's eta column on its grid.

    Returns ``(xs, ys, Z)`` with ``xs``/``ys`` the sorted unique axis values
    and ``Z[i, j]`` the eta at ``(xs[j], ys[i])``.  The grid must be complete
    and free of duplicates.
    """
    xs = np.unique(frame[x].to_numpy(float))
    ys = np.unique(frame[y].to_numpy(float))
    if frame.duplicated(subset=[x, y]).any():
        raise SchemaError(f"duplicate grid points in slice for axes ({x}, {y})")
    if len(frame) != len(xs) * len(ys):
        raise SchemaError(
            f"incomplete grid for axes ({x}, {y}): "
            f"{len(frame)} rows != {len(xs)} x {len(ys)}"
        )
    table = frame.pivot(index=y, columns=x, values="eta")
    table = table.sort_index().sort_index(axis=1)
    return xs, ys, table.to_numpy(float)


def argmax_cell(
    xs: np.ndarray, ys: np.ndarray, Z: np.ndarray
) -> tuple[float, float]:
    """Grid coordinates of the cell holding the largest finite eta."""
    masked = np.where(np.isfinite(Z), Z, -np.inf)
    if not np.isfinite(masked).any():
        raise SchemaError("slice has no finite eta values")
    i, j = np.unravel_index(np.argmax(masked), Z.shape)
    return float(xs[j]), float(ys[i])


def _cell_edges(centers: np.ndarray) -> np.ndarray:
    if len(centers) == 1:
        return np.array([centers[0] - 0.5, centers[0] + 0.5])
    mid = (centers[:-1] + centers[1:]) / 2
    first = centers[0] - (centers[1] - centers[0]) / 2
    last = centers[-1] + (centers[-1] - centers[-2]) / 2
    return np.concatenate([[first], mid, [last]])


def _slice_heatmap(spec: FigureSpec) -> Figure:
    (inp,) = spec.inputs
    x_name, y_name = spec.params
    frame = load_slice(inp.path, spec.params)
    xs, ys, Z = pivot_slice(frame, x_name, y_name)

    fig, (ax,) = _panels(1)
    mesh = ax.pcolormesh(xs, ys, np.ma.masked_invalid(Z), shading="nearest",
                         cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="eta")

    peak_x, peak_y = argmax_cell(xs, ys, Z)
    xe, ye = _cell_edges(xs), _cell_edges(ys)
    j = int(np.searchsorted(xs, peak_x))
    i = int(np.searchsorted(ys, peak_y))
    ax.add_patch(
        Rectangle(
            (xe[j], ye[i]), xe[j + 1] - xe[j], ye[i + 1] - ye[i],
            fill=False, edgecolor="#d62728", linewidth=2, label="max eta cell",
        )
    )
    if x_name in spec.truth and y_name in spec.truth:
        ax.plot([spec.truth[x_name]], [spec.truth[y_name]], linestyle="none",
                marker="x", color="white", markersize=11, markeredgewidth=2.5,
                label="truth")
    ax.grid(False)
    ax.set_xlabel(x_name)
    ax.set_ylabel(y_name)
    ax.legend(loc="upper right", fontsize=8)
    return fig


# ---------------------------------------------------------------------------
# entry points

_BUILDERS = {
    "trace": _trace,
    "density_overlay": _density_overlay,
    "histogram_ci": _histogram_ci,
    "slice_curve": _slice_curve,
    "slice_heatmap": _slice_heatmap,
}


def build_figure(spec: FigureSpec) -> Figure:
    """Build the matplotlib Figure for a validated spec (no file output)."""
    with style.context():
        fig = _BUILDERS[spec.kind](spec)
        if spec.title:
            fig.suptitle(spec.title)
    return fig


def render(spec: FigureSpec) -> Path:
    """Build the figure and write it to the spec's output path."""
    fig = build_figure(spec)
    with style.context():
        style.save_figure(fig, spec.output)
    return spec.output
