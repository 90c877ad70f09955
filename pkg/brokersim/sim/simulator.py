"""
Euler-Maruyama による市場シミュレーション

1ステップの流れ:
  1. 時刻 t_k の状態から η*_k と ν_k を計算（区間 [t_k, t_{k+1}) で一定）
  2. 価格・シグナル・非情報フロー・在庫・現金を進める
  3. 実現した増分で各フィルタを更新する
全パスを配列でまとめて進める。
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..coefficients.broker import BrokerCoefficients
from ..coefficients.trader import TraderCoefficients
from ..filters import (
    FlowFilterCoefficients,
    broker_price_filter_step,
    flow_drift,
    flow_filter_step,
    flow_observation,
    trader_filter_step,
)
from ..models.config import BrokerMode, QIMispecification, SignalSource, StrategyConfig
from ..models.params import ModelParams, TimeGrid
from ..utils.exceptions import SimulationBlowupError
from ..utils.logger import get_logger
from .noise import NOISE_DIM, draw_batch_noise

logger = get_logger("brokersim.sim")

STATE_FIELDS = ("S", "alpha", "xi", "QB", "QI", "XB", "XI", "qI_belief")
CONTROL_FIELDS = ("nu", "eta")
FILTER_FIELDS = ("nu_hat", "alpha_hat_price", "alpha_hat_flow", "alpha_hat_naive")
NU_COMPONENT_FIELDS = ("nu_qB", "nu_alpha", "nu_xi", "nu_qI")
ETA_COMPONENT_FIELDS = ("eta_alpha", "eta_nu", "eta_qI")
SERIES_FIELDS = (
    *STATE_FIELDS,
    *CONTROL_FIELDS,
    *FILTER_FIELDS,
    *NU_COMPONENT_FIELDS,
    *ETA_COMPONENT_FIELDS,
)

NO_BLOWUP = -1


@dataclass(frozen=True)
class PathResult:
    """
    1本のパスの時系列

    Attributes:
        grid: 時間グリッド
        series: フィールド名 → 長さ N+1 の配列
        broker_mode: ブローカーの戦略
        path_index: パス番号
        qI0: トレーダーの真の初期在庫
        blowup_step: 非有限値が最初に出たステップ（なければ None）
    """

    grid: TimeGrid
    series: dict[str, np.ndarray] = field(repr=False)
    broker_mode: str
    path_index: int = 0
    qI0: float = 0.0
    blowup_step: int | None = None

    def __getitem__(self, name: str) -> np.ndarray:
        return self.series[name]

    @property
    def blown_up(self) -> bool:
        return self.blowup_step is not None

    @property
    def terminal_wealth(self) -> float:
        """時価評価した終端資産 X^B_T + Q^B_T S_T"""
        return float(self.series["XB"][-1] + self.series["QB"][-1] * self.series["S"][-1])


@dataclass(frozen=True)
class BatchResult:
    """同じ戦略で同時に進めた複数パスの時系列（各配列の形状は (N+1, P)）"""

    grid: TimeGrid
    series: dict[str, np.ndarray] = field(repr=False)
    broker_mode: str
    path_indices: tuple[int, ...]
    qI0: np.ndarray
    blowup_step: np.ndarray

    def __len__(self) -> int:
        return len(self.path_indices)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.series[name]

    @property
    def blown_up(self) -> np.ndarray:
        return self.blowup_step != NO_BLOWUP

    @property
    def terminal_wealth(self) -> np.ndarray:
        return self.series["XB"][-1] + self.series["QB"][-1] * self.series["S"][-1]

    def path(self, column: int) -> PathResult:
        """列番号のパスを取り出す"""
        step = int(self.blowup_step[column])
        return PathResult(
            grid=self.grid,
            series={name: values[:, column].copy() for name, values in self.series.items()},
            broker_mode=self.broker_mode,
            path_index=self.path_indices[column],
            qI0=float(self.qI0[column]),
            blowup_step=None if step == NO_BLOWUP else step,
        )


def benchmark_control(
    kind: int | BrokerMode | str,
    t: float,
    state: dict[str, float | np.ndarray],
    grid: TimeGrid,
) -> float | np.ndarray:
    """
    ベンチマーク戦略の取引速度

    1: η* - Q^B/(T-t)、2: -Q^B/(T-t)、3: η* + ξ。
    最後のステップでは T-t を dt で下から抑える。

    Args:
        kind: ベンチマーク番号（1..3）または BrokerMode
        t: 時刻
        state: 'eta', 'QB', 'xi' を含む状態
        grid: 時間グリッド

    Returns:
        取引速度
    """
    number = _benchmark_number(kind)
    remaining = max(grid.horizon - t, grid.dt)
    if number == 1:
        return state["eta"] - state["QB"] / remaining
    if number == 2:
        return -state["QB"] / remaining
    return state["eta"] + state["xi"]


def _benchmark_number(kind: int | BrokerMode | str) -> int:
    if isinstance(kind, int):
        number = kind
    else:
        mode = BrokerMode(kind)
        if mode is BrokerMode.OPTIMAL:
            raise ValueError("optimal mode is not a benchmark")
        number = int(mode.value[-1])
    if number not in (1, 2, 3):
        raise ValueError(f"unknown benchmark: {kind}")
    return number


class MarketSimulator:
    """
    係数テーブルを共有して複数パスを進めるシミュレーター

    真の市場は params で動き、各エージェントは自分の係数
    （trader.params / broker.params のモデル）でフィルタと制御を計算する。
    """

    def __init__(
        self,
        params: ModelParams,
        trader: TraderCoefficients,
        broker: BrokerCoefficients,
        flow: FlowFilterCoefficients | None = None,
    ):
        self.params = params
        self.trader = trader
        self.broker = broker
        self.flow = flow
        self.grid = trader.grid
        if (broker.grid.horizon, broker.grid.steps) != (self.grid.horizon, self.grid.steps):
            raise ValueError("trader and broker coefficients are on different grids")

        b = trader.params.trader_cost
        self._eta_alpha = trader.z[0].values / (2.0 * b)
        self._eta_nu = trader.z[1].values / (2.0 * b)
        self._eta_q = trader.g2.values / b
        self._f1 = trader.f1.values
        self._f3 = trader.f3.values
        self._vI = trader.vI.values
        self._vB = broker.vB.values
        self._gains = broker.feedback.values

    def run(
        self,
        config: StrategyConfig,
        path_indices: Sequence[int],
        noise: np.ndarray | None = None,
        qI0: np.ndarray | None = None,
    ) -> BatchResult:
        """
        複数パスを同時にシミュレーションする

        Args:
            config: 戦略設定（seed をベースシードとして使う）
            path_indices: パス番号
            noise: 形状 (N, P, 3) の標準正規乱数（省略時は path_indices から生成）
            qI0: 形状 (P,) のトレーダー初期在庫（noise を渡した場合のみ有効）

        Returns:
            BatchResult
        """
        mode = BrokerMode(config.broker_mode)
        source = SignalSource(config.signal_source)
        mispecified = QIMispecification(config.mispecify_qi) is QIMispecification.NORMAL
        if mode is BrokerMode.OPTIMAL and source is SignalSource.FLOW and self.flow is None:
            raise ValueError("flow signal source needs flow filter coefficients")

        grid = self.grid
        n_steps = grid.steps
        n_paths = len(path_indices)
        if noise is None:
            noise, qI0 = draw_batch_noise(config.seed, path_indices, n_steps, mispecified)
        elif noise.shape != (n_steps, n_paths, NOISE_DIM):
            raise ValueError(f"noise must have shape {(n_steps, n_paths, NOISE_DIM)}")
        qI0 = np.zeros(n_paths) if qI0 is None else np.asarray(qI0, dtype=float)

        series = {name: np.zeros((n_steps + 1, n_paths)) for name in SERIES_FIELDS}
        blowup = np.full(n_paths, NO_BLOWUP, dtype=int)
        with np.errstate(all="ignore"):
            self._integrate(series, blowup, noise, qI0, mode, source, mispecified, config)

        blown = np.count_nonzero(blowup != NO_BLOWUP)
        if blown:
            logger.warning(
                f"{mode.value}: {blown}/{n_paths} パスで非有限値が発生しました "
                f"(最初のステップ {int(blowup[blowup != NO_BLOWUP].min())})"
            )
        return BatchResult(
            grid=grid,
            series=series,
            broker_mode=mode.value,
            path_indices=tuple(int(i) for i in path_indices),
            qI0=qI0,
            blowup_step=blowup,
        )

    def _integrate(
        self,
        series: dict[str, np.ndarray],
        blowup: np.ndarray,
        noise: np.ndarray,
        qI0: np.ndarray,
        mode: BrokerMode,
        source: SignalSource,
        mispecified: bool,
        config: StrategyConfig,
    ) -> None:
        params = self.params
        grid = self.grid
        dt = grid.dt
        sqrt_dt = np.sqrt(dt)
        times = grid.times
        n_steps = grid.steps
        flow = self.flow
        p = params.permanent_impact
        b = params.trader_cost
        rho_bar = np.sqrt(1.0 - params.rho**2)
        unwind_from = n_steps - config.unwind_steps if mispecified else n_steps + 1

        s = series
        s["S"][0] = params.s0
        s["alpha"][0] = params.alpha0
        s["QI"][0] = qI0
        z_prev = gamma_prev = None

        for k in range(n_steps + 1):
            t = float(times[k])

            eta_alpha = self._eta_alpha[k] * s["alpha"][k]
            eta_nu = self._eta_nu[k] * s["nu_hat"][k]
            eta_qI = self._eta_q[k] * s["QI"][k]
            eta = eta_alpha + eta_nu + eta_qI
            s["eta_alpha"][k] = eta_alpha
            s["eta_nu"][k] = eta_nu
            s["eta_qI"][k] = eta_qI
            s["eta"][k] = eta

            k_naive = min(k, n_steps - 1)
            s["alpha_hat_naive"][k] = (eta - self._f3[k_naive] * s["qI_belief"][k]) / self._f1[
                k_naive
            ]

            if flow is not None:
                gamma, z_tilde = flow_observation(eta, s["qI_belief"][k], flow, self._f3[k], k)
                if k > 0:
                    dZ = (
                        z_tilde
                        - z_prev
                        - flow_drift(z_prev, gamma_prev, s["nu"][k - 1], flow, k - 1) * dt
                    )
                    s["alpha_hat_flow"][k] = flow_filter_step(
                        s["alpha_hat_flow"][k - 1], dZ, dt, flow, k - 1
                    )
                z_prev, gamma_prev = z_tilde, gamma

            state = {"eta": eta, "QB": s["QB"][k], "xi": s["xi"][k]}
            if mode is BrokerMode.OPTIMAL:
                if k >= unwind_from:
                    # 在庫解消はすべて q^B 成分に載せる
                    unwind = benchmark_control(2, t, state, grid)
                    zero = np.zeros_like(s["QB"][k])
                    components = (unwind, zero, zero, zero)
                else:
                    signal = s[f"alpha_hat_{source.value}"][k]
                    gains = self._gains[k]
                    components = (
                        gains[0] * s["QB"][k],
                        gains[1] * signal,
                        gains[2] * s["xi"][k],
                        gains[3] * s["qI_belief"][k],
                    )
                for name, value in zip(NU_COMPONENT_FIELDS, components, strict=True):
                    s[name][k] = value
                nu = components[0] + components[1] + components[2] + components[3]
            else:
                nu = benchmark_control(mode, t, state, grid)
            s["nu"][k] = nu

            if k == n_steps:
                self._flag(blowup, s, k)
                break

            z = noise[k]
            dW_s = z[:, 0] * sqrt_dt
            dW_a = (params.rho * z[:, 0] + rho_bar * z[:, 1]) * sqrt_dt
            dW_u = z[:, 2] * sqrt_dt

            price = s["S"][k]
            alpha = s["alpha"][k]
            xi = s["xi"][k]
            s["S"][k + 1] = price + (p * nu + alpha) * dt + params.sigma_s * dW_s
            s["alpha"][k + 1] = alpha - params.kappa_alpha * alpha * dt + params.sigma_alpha * dW_a
            s["xi"][k + 1] = xi - params.kappa_u * xi * dt + params.sigma_u * dW_u
            s["QB"][k + 1] = s["QB"][k] + (nu - eta - xi) * dt
            s["QI"][k + 1] = s["QI"][k] + eta * dt
            s["qI_belief"][k + 1] = s["qI_belief"][k] + eta * dt
            s["XB"][k + 1] = s["XB"][k] + (
                -nu * (price + params.broker_cost * nu)
                + eta * (price + b * eta)
                + xi * (price + params.flow_cost * xi)
            ) * dt
            s["XI"][k + 1] = s["XI"][k] - eta * (price + b * eta) * dt

            dS = s["S"][k + 1] - price
            s["nu_hat"][k + 1] = trader_filter_step(
                s["nu_hat"][k], dS - alpha * dt, dt, self._vI[k], self.trader.params
            )
            s["alpha_hat_price"][k + 1] = broker_price_filter_step(
                s["alpha_hat_price"][k], dS - p * nu * dt, dt, self._vB[k], self.broker.params
            )
            self._flag(blowup, s, k)

    @staticmethod
    def _flag(blowup: np.ndarray, series: dict[str, np.ndarray], k: int) -> None:
        finite = np.ones(blowup.shape, dtype=bool)
        for values in series.values():
            finite &= np.isfinite(values[k])
        blowup[(~finite) & (blowup == NO_BLOWUP)] = k


def simulate_batch(
    params: ModelParams,
    trader: TraderCoefficients,
    broker: BrokerCoefficients,
    flow: FlowFilterCoefficients | None,
    config: StrategyConfig,
    path_indices: Sequence[int],
    noise: np.ndarray | None = None,
    qI0: np.ndarray | None = None,
) -> BatchResult:
    """MarketSimulator.run のショートカット"""
    return MarketSimulator(params, trader, broker, flow).run(config, path_indices, noise, qI0)


def simulate_path(
    params: ModelParams,
    trader: TraderCoefficients,
    broker: BrokerCoefficients,
    flow: FlowFilterCoefficients | None,
    config: StrategyConfig,
    seed: int | None = None,
    path_index: int = 0,
    noise: np.ndarray | None = None,
    qI0: float = 0.0,
) -> PathResult:
    """
    1本のパスをシミュレーションする

    Args:
        params: 真の市場パラメータ
        trader: トレーダー係数
        broker: ブローカー係数
        flow: フローフィルタ係数（None の場合 α̂^alt は 0 のまま）
        config: 戦略設定
        seed: ベースシード（省略時は config.seed）
        path_index: パス番号
        noise: 形状 (N, 3) の標準正規乱数（省略時は乱数から生成）
        qI0: noise を渡した場合のトレーダー初期在庫

    Returns:
        PathResult

    Raises:
        SimulationBlowupError: 状態が有限値でなくなった場合
    """
    if seed is not None:
        config = config.model_copy(update={"seed": seed})
    batch_noise = None if noise is None else np.asarray(noise, dtype=float)[:, None, :]
    batch_qI0 = None if noise is None else np.array([qI0])
    batch = simulate_batch(
        params, trader, broker, flow, config, [path_index], batch_noise, batch_qI0
    )
    result = batch.path(0)
    if result.blowup_step is not None:
        step = result.blowup_step
        raise SimulationBlowupError(step, t=float(trader.grid.times[step]))
    return result
