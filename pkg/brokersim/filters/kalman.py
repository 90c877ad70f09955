"""
価格観測に基づくKalman-Bucyフィルタの更新

平均はグリッド上のEuler-Maruyamaで更新し、分散は事前に解いた
決定論的テーブル（V^I, V^B）から読む。配列を渡せば全パスを一括更新できる。
"""

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from ..models.params import ModelParams

ArrayLike = float | np.ndarray


class FilterKind(str, Enum):
    """フィルタの種類"""

    TRADER_NU = "trader_nu"
    BROKER_PRICE = "broker_price"
    BROKER_FLOW = "broker_flow"


@dataclass(frozen=True)
class FilterState:
    """
    フィルタの平均と分散

    Attributes:
        mean: 条件付き平均（スカラーまたはパス方向の配列）
        variance: 条件付き分散（全パス共通）
        kind: フィルタの種類
    """

    mean: ArrayLike
    variance: float
    kind: FilterKind

    def __post_init__(self) -> None:
        if self.variance < 0.0:
            raise ValueError(f"filter variance must be non-negative, got {self.variance}")


def trader_gain(vI_t: float, params: ModelParams) -> float:
    """トレーダーのフィルタゲイン p V^I / σ_S^2"""
    return params.permanent_impact * vI_t / params.sigma_s**2


def broker_price_gain(vB_t: float, params: ModelParams) -> float:
    """ブローカーの価格フィルタゲイン (V^B + ρ σ_S σ_α) / σ_S^2"""
    return (vB_t + params.rho * params.sigma_s * params.sigma_alpha) / params.sigma_s**2


def trader_filter_step(
    nu_hat: ArrayLike, dY: ArrayLike, dt: float, vI_t: float, params: ModelParams
) -> ArrayLike:
    """
    ν̂ の1ステップ更新

    dν̂ = -θ^B ν̂ dt + (p V^I / σ_S^2)(dY - p ν̂ dt)、dY = dS - α dt。
    """
    p = params.permanent_impact
    return nu_hat - params.theta_b * nu_hat * dt + trader_gain(vI_t, params) * (
        dY - p * nu_hat * dt
    )


def broker_price_filter_step(
    alpha_hat: ArrayLike, dZ: ArrayLike, dt: float, vB_t: float, params: ModelParams
) -> ArrayLike:
    """
    価格ベースの α̂ の1ステップ更新

    dα̂ = -κ^α α̂ dt + ((V^B + ρ σ_S σ_α)/σ_S^2)(dZ - α̂ dt)、dZ = dS - p ν dt。
    """
    return alpha_hat - params.kappa_alpha * alpha_hat * dt + broker_price_gain(vB_t, params) * (
        dZ - alpha_hat * dt
    )


def update_trader_filter(
    state: FilterState,
    dY: ArrayLike,
    dt: float,
    vI_t: float,
    params: ModelParams,
    next_variance: float | None = None,
) -> FilterState:
    """
    トレーダーのフィルタ状態を更新

    Args:
        state: 時刻 t の状態
        dY: 価格増分から α dt を引いた観測増分
        dt: 時間刻み
        vI_t: 時刻 t の V^I
        params: モデルパラメータ
        next_variance: 時刻 t+dt の V^I（省略時は vI_t を保持）

    Returns:
        更新後の状態
    """
    mean = trader_filter_step(state.mean, dY, dt, vI_t, params)
    variance = vI_t if next_variance is None else next_variance
    return replace(state, mean=mean, variance=variance)


def update_broker_price_filter(
    state: FilterState,
    dZ: ArrayLike,
    dt: float,
    vB_t: float,
    params: ModelParams,
    next_variance: float | None = None,
) -> FilterState:
    """
    ブローカーの価格フィルタ状態を更新

    Args:
        state: 時刻 t の状態
        dZ: 価格増分から p ν dt を引いた観測増分
        dt: 時間刻み
        vB_t: 時刻 t の V^B
        params: モデルパラメータ
        next_variance: 時刻 t+dt の V^B（省略時は vB_t を保持）

    Returns:
        更新後の状態
    """
    mean = broker_price_filter_step(state.mean, dZ, dt, vB_t, params)
    variance = vB_t if next_variance is None else next_variance
    return replace(state, mean=mean, variance=variance)
