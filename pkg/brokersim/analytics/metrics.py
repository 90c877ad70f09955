"""
パス単位の指標: 取引100万ドルあたりの超過収益、外部化比率、推定量の比較
"""

from typing import TYPE_CHECKING

import numpy as np
from scipy.integrate import trapezoid

from ..numerics import DeterministicTable
from ..utils.exceptions import ErrorMessages, FilterDegeneracyError, UndefinedMetricError

if TYPE_CHECKING:
    from ..coefficients import BrokerCoefficients, TraderCoefficients
    from ..sim.simulator import BatchResult, PathResult

PER_MILLION = 1e6
DEFAULT_EPSILON = 0.1
F1_FLOOR = 1e-14
BAND_PERCENTILES = (5.0, 50.0, 95.0)
# 推定量比較で終端付近を除くステップ数
TERMINAL_EXCLUSION_STEPS = 10


def traded_notional(path: "PathResult | BatchResult") -> float | np.ndarray:
    """∫ S (|ν| + |η*| + |ξ|) du を台形則で計算"""
    integrand = path["S"] * (np.abs(path["nu"]) + np.abs(path["eta"]) + np.abs(path["xi"]))
    return trapezoid(integrand, dx=path.grid.dt, axis=0)


def outperformance(path_opt: "PathResult", path_bench: "PathResult") -> float:
    """
    最適戦略のベンチマークに対する超過収益（取引100万ドルあたり）

    分母はベンチマーク側の時系列で計算する。

    Args:
        path_opt: 最適戦略のパス
        path_bench: 同じ乱数で走らせたベンチマークのパス

    Returns:
        超過収益

    Raises:
        UndefinedMetricError: 取引総額がゼロの場合
    """
    notional = float(traded_notional(path_bench))
    if notional == 0.0 or not np.isfinite(notional):
        raise UndefinedMetricError(ErrorMessages.ZERO_NOTIONAL)
    return (path_opt.terminal_wealth - path_bench.terminal_wealth) / notional * PER_MILLION


def outperformance_batch(opt: "BatchResult", bench: "BatchResult") -> np.ndarray:
    """パスごとの超過収益（発散・取引ゼロのパスは NaN）"""
    notional = np.asarray(traded_notional(bench))
    gap = opt.terminal_wealth - bench.terminal_wealth
    valid = (notional > 0.0) & np.isfinite(notional) & ~opt.blown_up & ~bench.blown_up
    result = np.full(len(opt), np.nan)
    result[valid] = gap[valid] / notional[valid] * PER_MILLION
    return result


def _clamp(x: np.ndarray | float, epsilon: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.where(x >= 0.0, np.maximum(x, epsilon), np.minimum(x, -epsilon))


def externalisation_quotient(
    nu: float | np.ndarray, eta: float | np.ndarray, epsilon: float = DEFAULT_EPSILON
) -> float | np.ndarray:
    """
    外部化比率 G(ν)/G(η)

    G(x) = max(x, ε) (x ≥ 0)、min(x, -ε) (x < 0) なので分母はゼロにならない。
    """
    quotient = _clamp(nu, epsilon) / _clamp(eta, epsilon)
    return float(quotient) if np.ndim(quotient) == 0 else quotient


def effective_externalisation(
    trader: "TraderCoefficients", broker: "BrokerCoefficients"
) -> DeterministicTable:
    """
    実効外部化率 f^B_α / f^I_α

    f^B_α はブローカーのフィードバックの α̂ 成分、f^I_α = f1。
    f1(T) = 0 のため t=T は直前のグリッド点の値を使う。

    Raises:
        FilterDegeneracyError: t<T で f1 が 1e-14 未満の場合
    """
    f1 = np.asarray(trader.f1.values)
    gain = np.asarray(broker.feedback.values)[:, 1]
    n = trader.grid.steps
    bad = np.flatnonzero(np.abs(f1[:n]) < F1_FLOOR)
    if bad.size:
        t = float(trader.grid.times[bad[0]])
        raise FilterDegeneracyError(
            ErrorMessages.FILTER_DEGENERATE.format(quantity="f1 = 0", t=t), t=t
        )
    ratio = gain[:n] / f1[:n]
    return DeterministicTable("effective_externalisation", trader.grid, np.append(ratio, ratio[-1]))


def externalisation_profile(
    batch: "BatchResult", epsilon: float = DEFAULT_EPSILON
) -> DeterministicTable:
    """時刻ごとのパス中央値 median(G(ν)/G(η*))"""
    quotient = externalisation_quotient(batch["nu"], batch["eta"], epsilon)
    valid = ~batch.blown_up
    return DeterministicTable(
        "externalisation_median", batch.grid, np.median(np.asarray(quotient)[:, valid], axis=1)
    )


def percentile_bands(
    batch: "BatchResult",
    fields: tuple[str, ...],
    percentiles: tuple[float, ...] = BAND_PERCENTILES,
) -> dict[str, np.ndarray]:
    """
    時刻ごとのパーセンタイル帯

    Returns:
        '{field}_p{percentile}' → 長さ N+1 の配列
    """
    valid = ~batch.blown_up
    bands: dict[str, np.ndarray] = {}
    for name in fields:
        values = np.percentile(batch[name][:, valid], percentiles, axis=1)
        for q, row in zip(percentiles, values, strict=True):
            bands[f"{name}_p{q:g}"] = row
    return bands


def estimator_gap(
    batch: "BatchResult", exclude_terminal_steps: int = TERMINAL_EXCLUSION_STEPS
) -> np.ndarray:
    """パスごとの max_{t ≤ T - m dt} |α̂^alt - α̂^naive|"""
    stop = batch.grid.steps - exclude_terminal_steps + 1
    diff = np.abs(batch["alpha_hat_flow"][:stop] - batch["alpha_hat_naive"][:stop])
    return diff.max(axis=0)


def estimator_gap_profile(batch: "BatchResult") -> dict[str, np.ndarray]:
    """時刻ごとの |α̂^alt - α̂^naive| のパス最大値と中央値"""
    diff = np.abs(batch["alpha_hat_flow"] - batch["alpha_hat_naive"])
    return {"max": diff.max(axis=1), "median": np.median(diff, axis=1)}


def mean_squared_error(batch: "BatchResult", estimator: str) -> np.ndarray:
    """パスごとの時間平均二乗誤差 mean_t (α̂ - α)^2"""
    return np.mean((batch[f"alpha_hat_{estimator}"] - batch["alpha"]) ** 2, axis=0)
