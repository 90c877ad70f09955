"""Pydantic models for brokersim."""

from .base import BrokerSimBaseModel
from .config import (
    BrokerMode,
    DebugSettings,
    ExperimentSettings,
    OutputSettings,
    ProfilingSettings,
    QIMispecification,
    RunConfig,
    SignalSource,
    SolverSettings,
    StrategyConfig,
    StressSettings,
)
from .params import LEARNING_PARAMETERS, ModelParams, TimeGrid
from .report import (
    REPORT_SCHEMA_VERSION,
    ArmPerformance,
    BenchmarkOutperformance,
    ExperimentReport,
    ReportMetadata,
    StressCell,
    StressReport,
    TTestResult,
)

__all__ = [
    "ArmPerformance",
    "BenchmarkOutperformance",
    "BrokerMode",
    "BrokerSimBaseModel",
    "DebugSettings",
    "ExperimentReport",
    "ExperimentSettings",
    "LEARNING_PARAMETERS",
    "ModelParams",
    "OutputSettings",
    "ProfilingSettings",
    "QIMispecification",
    "REPORT_SCHEMA_VERSION",
    "ReportMetadata",
    "RunConfig",
    "SignalSource",
    "SolverSettings",
    "StrategyConfig",
    "StressCell",
    "StressReport",
    "StressSettings",
    "TTestResult",
    "TimeGrid",
]
