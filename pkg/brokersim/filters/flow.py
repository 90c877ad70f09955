"""
注文フローに基づく α の推定

ブローカーはトレーダーの取引速度 η* を観測できる。η* から在庫項を除いた
γ = η* - f3 Q^I を正規化して観測過程を作り、α を直接フィルタリングする。
"""

from dataclasses import dataclass

import numpy as np

from ..coefficients.trader import TraderCoefficients
from ..models.params import ModelParams, TimeGrid
from ..numerics import DeterministicTable, Direction, solve_scalar_riccati
from ..utils.exceptions import ErrorMessages, FilterDegeneracyError
from ..utils.logger import get_logger
from .kalman import ArrayLike, FilterKind, FilterState

logger = get_logger("brokersim.filters.flow")

F1_FLOOR = 1e-14


@dataclass(frozen=True)
class FlowFilterCoefficients:
    """
    フローフィルタの係数テーブル

    t=T では G5, G6, G8 (と G0) は直前のグリッド点の値、G7, G9, K は
    直前2点からの線形外挿で置き換えている。
    """

    params: ModelParams
    grid: TimeGrid
    G0: DeterministicTable
    G_alpha: DeterministicTable
    G1: DeterministicTable
    G2: DeterministicTable
    G3: DeterministicTable
    G4: DeterministicTable
    G5: DeterministicTable
    G6: DeterministicTable
    G7: DeterministicTable
    G8: DeterministicTable
    G9: DeterministicTable
    G10: DeterministicTable
    K: DeterministicTable
    G3_prime: DeterministicTable
    G4_prime: DeterministicTable
    valt: DeterministicTable

    def tables(self) -> list[DeterministicTable]:
        return [
            self.G0,
            self.G_alpha,
            self.G1,
            self.G2,
            self.G3,
            self.G4,
            self.G5,
            self.G6,
            self.G7,
            self.G8,
            self.G9,
            self.G10,
            self.K,
            self.valt,
        ]


def _hold_last(interior: np.ndarray) -> np.ndarray:
    return np.append(interior, interior[-1])


def _extrapolate(interior: np.ndarray) -> np.ndarray:
    return np.append(interior, 2.0 * interior[-1] - interior[-2])


def flow_filter_coefficients(
    trader: TraderCoefficients, params: ModelParams | None = None, grid: TimeGrid | None = None
) -> FlowFilterCoefficients:
    """
    フローフィルタの G 係数と分散 V^alt を計算する

    導関数 G3', G4' はトレーダーの係数ODEから得られる閉形式を使う。

    Args:
        trader: トレーダー係数
        params: モデルパラメータ（省略時は trader.params）
        grid: 時間グリッド（省略時は trader.grid）

    Returns:
        FlowFilterCoefficients

    Raises:
        FilterDegeneracyError: t<T で f2 = 0 (p>0) または G5 = 0 となる場合
    """
    params = params or trader.params
    grid = grid or trader.grid
    times = grid.times
    n = grid.steps

    b = params.trader_cost
    p = params.permanent_impact
    sigma_s = params.sigma_s
    sigma_a = params.sigma_alpha
    rho = params.rho
    kappa = params.kappa_alpha
    theta = params.theta_b

    f1 = np.asarray(trader.f1.values)
    f2 = np.asarray(trader.f2.values)
    f3 = np.asarray(trader.f3.values)
    vI = np.asarray(trader.vI.values)

    if p > 0.0:
        bad = np.flatnonzero(f2[:n] <= 0.0)
        if bad.size:
            t = float(times[bad[0]])
            raise FilterDegeneracyError(
                ErrorMessages.FILTER_DEGENERATE.format(quantity="f2 = 0", t=t), t=t
            )
        g0 = _hold_last(-(p**2) * vI[:n] / sigma_s**2 - p / (2.0 * b * f2[:n]) - f3[:n] / 2.0)
    else:
        g0 = np.zeros(len(grid))

    g_alpha = -1.0 / (2.0 * b) - f1 * (f3 / 2.0 + g0)
    g1 = p**2 * vI * f2 / sigma_s**2
    g3 = sigma_a * f1
    g4 = p * vI * f2 / sigma_s

    g5_interior = np.sqrt(np.maximum(g3[:n] ** 2 + g4[:n] ** 2 + 2.0 * rho * g3[:n] * g4[:n], 0.0))
    bad = np.flatnonzero(g5_interior <= 0.0)
    if bad.size:
        t = float(times[bad[0]])
        raise FilterDegeneracyError(
            ErrorMessages.FILTER_DEGENERATE.format(quantity="G5 = 0", t=t), t=t
        )

    g3_prime = sigma_a * (-1.0 / (2.0 * b) + kappa * f1 - f3 * f1 / 2.0)
    vI_prime = params.sigma_b**2 - 2.0 * theta * vI - p**2 * vI**2 / sigma_s**2
    g4_prime = (p / sigma_s) * (vI * (-p / (2.0 * b) + theta * f2 - f3 * f2 / 2.0) + f2 * vI_prime)

    g5_sq = g5_interior**2
    g6_interior = (
        -(
            g3_prime[:n] * (g3[:n] + rho * g4[:n])
            + g4_prime[:n] * (rho * g3[:n] + g4[:n])
        )
        / g5_sq
    )

    def table(name: str, values: np.ndarray) -> DeterministicTable:
        return DeterministicTable(name, grid, values)

    G7 = table("G7", _extrapolate(g_alpha[:n] / g5_interior))
    K = table("K", _extrapolate((g3[:n] + rho * g4[:n]) / g5_interior))

    valt = solve_scalar_riccati(
        q=G7.map("valt_q", lambda v: -(v**2)),
        l=table("valt_l", -2.0 * kappa - 2.0 * sigma_a * K.values * G7.values),
        c=K.map("valt_c", lambda v: sigma_a**2 * (1.0 - v**2)),
        boundary=0.0,
        grid=grid,
        direction=Direction.FORWARD,
        name="valt",
    )

    logger.info(
        f"フローフィルタ係数を計算しました (N={n}, G5(0)={g5_interior[0]:.6g}, "
        f"valt_T={float(valt.terminal):.6g})"
    )
    return FlowFilterCoefficients(
        params=params,
        grid=grid,
        G0=table("G0", g0),
        G_alpha=table("G_alpha", g_alpha),
        G1=table("G1", g1),
        G2=table("G2", np.zeros(len(grid))),
        G3=table("G3", g3),
        G4=table("G4", g4),
        G5=table("G5", _hold_last(g5_interior)),
        G6=table("G6", _hold_last(g6_interior)),
        G7=G7,
        G8=table("G8", _hold_last(g0[:n] / g5_interior)),
        G9=table("G9", _extrapolate(g1[:n] / g5_interior)),
        G10=table("G10", np.zeros(len(grid))),
        K=K,
        G3_prime=table("G3_prime", g3_prime),
        G4_prime=table("G4_prime", g4_prime),
        valt=valt,
    )


def flow_gain(flow: FlowFilterCoefficients, k: int) -> float:
    """グリッド点 k でのイノベーションゲイン G7 V^alt + σ_α K"""
    return float(
        flow.G7.values[k] * flow.valt.values[k] + flow.params.sigma_alpha * flow.K.values[k]
    )


def flow_observation(
    eta_star: ArrayLike, qI_belief: ArrayLike, flow: FlowFilterCoefficients, f3: float, k: int
) -> tuple[ArrayLike, ArrayLike]:
    """
    観測 γ = η* - f3 Q^I と正規化観測 Z̃ = γ / G5 を返す

    Q^I にはブローカーが信じるトレーダー在庫を使う。
    """
    gamma = eta_star - f3 * qI_belief
    return gamma, gamma / flow.G5.values[k]


def flow_drift(
    z_tilde: ArrayLike, gamma: ArrayLike, nu: ArrayLike, flow: FlowFilterCoefficients, k: int
) -> ArrayLike:
    """観測過程の既知ドリフト G6 Z̃ + G8 γ + G9 ν + G10（グリッド点 k）"""
    return (
        flow.G6.values[k] * z_tilde
        + flow.G8.values[k] * gamma
        + flow.G9.values[k] * nu
        + flow.G10.values[k]
    )


def flow_filter_step(
    alpha_hat: ArrayLike, dZ: ArrayLike, dt: float, flow: FlowFilterCoefficients, k: int
) -> ArrayLike:
    """
    α̂^alt の1ステップ更新（係数はグリッド点 k で評価）

    dα̂ = -κ^α α̂ dt + (G7 V^alt + σ_α K)(dZ - G7 α̂ dt)
    """
    g7 = flow.G7.values[k]
    return (
        alpha_hat
        - flow.params.kappa_alpha * alpha_hat * dt
        + flow_gain(flow, k) * (dZ - g7 * alpha_hat * dt)
    )


def update_broker_flow_filter(
    state: FilterState, dZ: ArrayLike, dt: float, flow: FlowFilterCoefficients, t: float
) -> FilterState:
    """
    フローフィルタの状態を更新

    Args:
        state: 時刻 t の状態
        dZ: 変換済みの観測増分 dZ̃ - 𝔣 dt
        dt: 時間刻み
        flow: フローフィルタ係数
        t: 時刻（グリッド点）

    Returns:
        更新後の状態

    Raises:
        FilterDegeneracyError: 更新結果が有限値でない場合
    """
    k = min(int(round(t / flow.grid.dt)), flow.grid.steps)
    mean = flow_filter_step(state.mean, dZ, dt, flow, k)
    if not np.all(np.isfinite(mean)):
        raise FilterDegeneracyError(
            ErrorMessages.FILTER_DEGENERATE.format(quantity="alpha_alt", t=t), t=t
        )
    next_k = min(k + 1, flow.grid.steps)
    return FilterState(
        mean=mean, variance=float(flow.valt.values[next_k]), kind=FilterKind.BROKER_FLOW
    )


def naive_alpha(
    t: float, eta_star: ArrayLike, qI_belief: ArrayLike, trader: TraderCoefficients
) -> ArrayLike:
    """
    素朴推定量 (η* - f3 Q^I) / f1

    f1(T) = 0 のため、最後の区間では直前のグリッド点の係数を使う。

    Raises:
        FilterDegeneracyError: f1 が 1e-14 未満の場合
    """
    grid = trader.grid
    k = min(int(round(t / grid.dt)), grid.steps - 1)
    f1 = float(trader.f1.values[k])
    if abs(f1) < F1_FLOOR:
        raise FilterDegeneracyError(
            ErrorMessages.FILTER_DEGENERATE.format(quantity="f1 = 0", t=t), t=t
        )
    return (eta_star - float(trader.f3.values[k]) * qI_belief) / f1
