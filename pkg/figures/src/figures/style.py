"""One pinned style so identical inputs always produce identical bytes.

Every rcParam that affects layout or encoding is fixed here; bump
``STYLE_VERSION`` whenever any of them changes.  SVG output drops the
creation date and salts element ids with the style version; PNG metadata
is pinned to the style version.  Given the same inputs, the same style
version, and the same matplotlib build, re-renders are byte-identical.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
from cycler import cycler  # noqa: E402

STYLE_VERSION = "1.0"

_RC = {
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "figure.constrained_layout.use": True,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.prop_cycle": cycler(
        color=["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    ),
    "lines.linewidth": 1.2,
    "path.simplify": False,
    "svg.hashsalt": STYLE_VERSION,
}


def context():
    """rc context under which all figures are built and saved."""
    return matplotlib.rc_context(_RC)


def save_figure(fig, path: Path) -> None:
    """Write ``fig`` to ``path`` (.png or .svg) with pinned metadata."""
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix == ".svg":
        metadata = {"Date": None}  # drop the embedded creation timestamp
    else:
        metadata = {"Software": f"figures {STYLE_VERSION}"}
    try:
        fig.savefig(path, metadata=metadata)
    finally:
        plt.close(fig)
