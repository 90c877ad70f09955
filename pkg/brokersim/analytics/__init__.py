"""
実験結果の統計と指標
"""

from .metrics import (
    effective_externalisation,
    estimator_gap,
    estimator_gap_profile,
    externalisation_profile,
    externalisation_quotient,
    mean_squared_error,
    outperformance,
    outperformance_batch,
    percentile_bands,
    traded_notional,
)
from .statistics import one_sided_t_test, summarize_arm, summarize_outperformance
from .stress import STRESS_HEADER, format_stress_cell, stress_rows, stress_runner
from .sweeps import CBeliefSweep, c_belief_sweep, externalisation_sweep

__all__ = [
    "CBeliefSweep",
    "STRESS_HEADER",
    "c_belief_sweep",
    "effective_externalisation",
    "estimator_gap",
    "estimator_gap_profile",
    "externalisation_profile",
    "externalisation_quotient",
    "externalisation_sweep",
    "format_stress_cell",
    "mean_squared_error",
    "one_sided_t_test",
    "outperformance",
    "outperformance_batch",
    "percentile_bands",
    "stress_rows",
    "stress_runner",
    "traded_notional",
]
