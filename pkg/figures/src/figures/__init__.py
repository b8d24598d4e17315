"""Deterministic figure rendering for MCMC chain and likelihood-slice CSVs.

Five figure kinds — trace, density_overlay, histogram_ci, slice_curve,
slice_heatmap — described by small JSON spec documents and rendered with a
pinned style so identical inputs re-render byte-identically.
"""

from .errors import FigureError, SchemaError, SpecError
from .render import argmax_cell, build_figure, pivot_slice, render
from .schema import CHAIN_COLUMNS, SLICE_COLUMNS, load_chain, load_slice
from .spec import KINDS, FigureSpec, InputSpec, load_spec, spec_from_dict
from .style import STYLE_VERSION

__version__ = "0.1.0"

__all__ = [
    "CHAIN_COLUMNS",
    "SLICE_COLUMNS",
    "FigureError",
    "FigureSpec",
    "InputSpec",
    "KINDS",
    "STYLE_VERSION",
    "SchemaError",
    "SpecError",
    "argmax_cell",
    "build_figure",
    "load_chain",
    "load_slice",
    "load_spec",
    "pivot_slice",
    "render",
    "spec_from_dict",
]
