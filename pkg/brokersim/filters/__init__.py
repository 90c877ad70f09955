"""
フィルタ（トレーダーの ν̂、ブローカーの価格・フロー・素朴推定量）
"""

from .flow import (
    FlowFilterCoefficients,
    flow_drift,
    flow_filter_coefficients,
    flow_filter_step,
    flow_gain,
    flow_observation,
    naive_alpha,
    update_broker_flow_filter,
)
from .kalman import (
    FilterKind,
    FilterState,
    broker_price_filter_step,
    broker_price_gain,
    trader_filter_step,
    trader_gain,
    update_broker_price_filter,
    update_trader_filter,
)

__all__ = [
    "FilterKind",
    "FilterState",
    "FlowFilterCoefficients",
    "broker_price_filter_step",
    "broker_price_gain",
    "flow_drift",
    "flow_filter_coefficients",
    "flow_filter_step",
    "flow_gain",
    "flow_observation",
    "naive_alpha",
    "trader_filter_step",
    "trader_gain",
    "update_broker_flow_filter",
    "update_broker_price_filter",
]
