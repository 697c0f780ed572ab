"""t-tests, effect sizes, correlations and the crossed random-intercepts LMM."""

from .analysis import (
    ALL_USERS,
    COMBINED,
    analyze,
    lmm_recipient_table,
    lmm_shared_table,
    promiscuity_correlations,
    recipient_table,
    sender_recipient_table,
    sender_rating_table,
)
from .lmm import (
    OBSERVATION_COLUMNS,
    LmmComparison,
    LmmFit,
    LmmObservation,
    LrtResult,
    condition_lrt,
    fit_lmm,
    likelihood_ratio_test,
    observations_frame,
    read_observations,
)
from .ttest import (
    CorrelationResult,
    SampleSummary,
    TTestResult,
    cohens_d,
    paired_t,
    pearson_corr,
    pearson_test,
    pooled_t_from_summary,
    welch_t,
    welch_t_from_summary,
)

__all__ = [
    "SampleSummary",
    "TTestResult",
    "CorrelationResult",
    "welch_t_from_summary",
    "pooled_t_from_summary",
    "welch_t",
    "paired_t",
    "cohens_d",
    "pearson_corr",
    "pearson_test",
    "LmmObservation",
    "LmmFit",
    "LrtResult",
    "LmmComparison",
    "fit_lmm",
    "likelihood_ratio_test",
    "condition_lrt",
    "read_observations",
    "observations_frame",
    "OBSERVATION_COLUMNS",
    "ALL_USERS",
    "COMBINED",
    "sender_rating_table",
    "sender_recipient_table",
    "recipient_table",
    "promiscuity_correlations",
    "lmm_shared_table",
    "lmm_recipient_table",
    "analyze",
]
