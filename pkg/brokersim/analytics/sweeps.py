"""
パラメータスイープ: 実効外部化率の κ^α 依存と二次的信念 c_belief
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..coefficients import compute_broker_coefficients, compute_trader_coefficients
from ..models.config import BrokerMode, StrategyConfig
from ..models.params import ModelParams, TimeGrid
from ..numerics import DeterministicTable
from ..utils.logger import get_logger
from .metrics import effective_externalisation

logger = get_logger("brokersim.analytics.sweeps")

STATE_ORDER = ("QB", "alpha_hat_price", "xi", "qI_belief")


def externalisation_sweep(
    params: ModelParams,
    grid: TimeGrid,
    parameter: str = "kappa_alpha",
    values: Sequence[float] = (2.5, 5.0, 7.5),
) -> dict[float, DeterministicTable]:
    """
    パラメータ値ごとの実効外部化率テーブル

    Returns:
        値 → effective_externalisation テーブル
    """
    from ..sim.experiment import solve_model

    tables: dict[float, DeterministicTable] = {}
    for value in values:
        model = solve_model(params.model_copy(update={parameter: value}), grid)
        table = effective_externalisation(model.trader, model.broker)
        tables[value] = DeterministicTable(f"{parameter}={value:g}", grid, table.values)
    return tables


@dataclass(frozen=True)
class CBeliefSweep:
    """
    c_belief スイープの結果

    Attributes:
        gains: c_belief → フィードバック係数テーブル（形状 (N+1, 4)）
        spearman: c_belief → ν*(c) - ν*(c0) と q^B の順位相関（基準値自身は含まない）
        reference: 比較の基準となる c_belief
    """

    gains: dict[float, DeterministicTable]
    spearman: dict[float, float]
    reference: float


def c_belief_sweep(
    params: ModelParams,
    grid: TimeGrid,
    values: Sequence[float] = (0.0, 0.5, 1.0),
    n_paths: int = 200,
    seed: int = 42,
    reference: float = 0.0,
    simulate_with: float = 1.0,
) -> CBeliefSweep:
    """
    二次的信念 c_belief を変えたときのブローカーのフィードバックを比較する

    c = simulate_with の最適戦略で状態をシミュレーションし、全パス・全時刻の
    状態 ỹ を集めて ν*(c) - ν*(reference) と q^B のSpearman順位相関を求める。

    Args:
        params: モデルパラメータ
        grid: 時間グリッド
        values: 比較する c_belief
        n_paths: 状態を集めるパス数
        seed: ベースシード
        reference: 差を取る基準の c_belief
        simulate_with: 状態の生成に使う c_belief

    Returns:
        CBeliefSweep
    """
    from ..sim.simulator import MarketSimulator

    trader = compute_trader_coefficients(params, grid)
    brokers = {
        c: compute_broker_coefficients(params, trader, grid, c)
        for c in {*values, reference, simulate_with}
    }

    simulator = MarketSimulator(params, trader, brokers[simulate_with])
    batch = simulator.run(
        StrategyConfig(broker_mode=BrokerMode.OPTIMAL, seed=seed), list(range(n_paths))
    )
    valid = ~batch.blown_up
    states = np.stack([batch[name][:, valid] for name in STATE_ORDER], axis=-1)
    qB = states[..., 0].ravel()

    base_gains = brokers[reference].feedback.values
    spearman: dict[float, float] = {}
    for c in values:
        if c == reference:
            continue
        delta = np.einsum("tpi,ti->tp", states, brokers[c].feedback.values - base_gains)
        result = stats.spearmanr(delta.ravel(), qB)
        spearman[c] = float(result.statistic)
        logger.info(f"c_belief={c:g}: Spearman(Δν*, q^B) = {spearman[c]:.4f}")

    gains = {
        c: DeterministicTable(f"gains_c={c:g}", grid, brokers[c].feedback.values) for c in values
    }
    return CBeliefSweep(gains=gains, spearman=spearman, reference=reference)
