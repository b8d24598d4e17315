"""Likelihood-free Bayesian inference with classifier-estimated likelihood ratios."""

from clfmh.rng import RngStream, make_stream

__version__ = "0.1.0"

__all__ = ["RngStream", "make_stream", "__version__"]
