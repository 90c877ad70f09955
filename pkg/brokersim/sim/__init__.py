"""
市場シミュレーションとモンテカルロ実験
"""

from .experiment import ExperimentResult, SolvedModel, build_report, run_experiment, solve_model
from .noise import draw_batch_noise, draw_path_noise, path_rng
from .simulator import (
    SERIES_FIELDS,
    BatchResult,
    MarketSimulator,
    PathResult,
    benchmark_control,
    simulate_batch,
    simulate_path,
)

__all__ = [
    "BatchResult",
    "ExperimentResult",
    "MarketSimulator",
    "PathResult",
    "SERIES_FIELDS",
    "SolvedModel",
    "benchmark_control",
    "build_report",
    "draw_batch_noise",
    "draw_path_noise",
    "path_rng",
    "run_experiment",
    "simulate_batch",
    "simulate_path",
]
