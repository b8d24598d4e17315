"""Samplers: MH kernels, the de-biasing combiner, and rejection sampling."""

from clfmh.samplers.abc import ABCResult, dataset_summary, run_abc
from clfmh.samplers.chains import Chain
from clfmh.samplers.mh import (
    ChainConfig,
    accept_prob,
    debias,
    run_exact_mh,
    run_mcwm,
    run_mhc,
    run_ricker_mcwm,
)
from clfmh.samplers.priors import (
    CIRImproper,
    FlatImproper,
    ModelChoicePrior,
    NormalInverseGamma,
    Prior,
    UniformBox,
    default_prior,
)
from clfmh.samplers.proposals import (
    DiscreteFlipPlusRW,
    GaussianRW,
    LogGaussianRW,
    PerCoordMixed,
    Proposal,
    UniformWindowBlocked,
)

__all__ = [
    "ABCResult",
    "Chain",
    "ChainConfig",
    "CIRImproper",
    "DiscreteFlipPlusRW",
    "FlatImproper",
    "GaussianRW",
    "LogGaussianRW",
    "ModelChoicePrior",
    "NormalInverseGamma",
    "PerCoordMixed",
    "Prior",
    "Proposal",
    "UniformBox",
    "UniformWindowBlocked",
    "accept_prob",
    "dataset_summary",
    "debias",
    "default_prior",
    "run_abc",
    "run_exact_mh",
    "run_mcwm",
    "run_mhc",
    "run_ricker_mcwm",
]
