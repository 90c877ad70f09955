"""
両エージェントの決定論的係数システム
"""

from .broker import (
    BrokerCoefficients,
    BrokerRate,
    EigenDiagnostic,
    PMatrices,
    broker_control,
    broker_value,
    build_P_matrices,
    compute_broker_coefficients,
    compute_vB_price,
    existence_diagnostic,
    reduced_system,
    solve_broker_riccati,
)
from .trader import (
    TraderCoefficients,
    compute_g2,
    compute_trader_coefficients,
    compute_vI,
    compute_z,
    trader_control,
    trader_control_components,
    trader_value,
)

__all__ = [
    "BrokerCoefficients",
    "BrokerRate",
    "EigenDiagnostic",
    "PMatrices",
    "TraderCoefficients",
    "broker_control",
    "broker_value",
    "build_P_matrices",
    "compute_broker_coefficients",
    "compute_g2",
    "compute_trader_coefficients",
    "compute_vB_price",
    "compute_vI",
    "compute_z",
    "existence_diagnostic",
    "reduced_system",
    "solve_broker_riccati",
    "trader_control",
    "trader_control_components",
    "trader_value",
]
