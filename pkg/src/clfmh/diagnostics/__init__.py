"""Chain summaries and theory-verification diagnostics."""

from clfmh.diagnostics.summaries import (
    PosteriorSummary,
    bayes_factor,
    ess,
    summarize,
    summary_stats,
)
from clfmh.diagnostics.theory import (
    FISHER_INFO,
    TheoryReport,
    normalizing_constant,
    theory_check_normal,
    true_logistic_beta,
)

__all__ = [
    "FISHER_INFO",
    "PosteriorSummary",
    "TheoryReport",
    "bayes_factor",
    "ess",
    "normalizing_constant",
    "summarize",
    "summary_stats",
    "theory_check_normal",
    "true_logistic_beta",
]
