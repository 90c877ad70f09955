"""
片側t検定と成績の集計
"""

import numpy as np
from scipy import stats

from ..models.report import ArmPerformance, BenchmarkOutperformance, TTestResult


def one_sided_t_test(samples: np.ndarray | list[float]) -> TTestResult:
    """
    H0: 平均 = 0、H1: 平均 > 0 の片側t検定

    n < 2 または標準偏差ゼロの場合は t = 0、p = 0.5 を返して degenerate を立てる。

    Args:
        samples: 標本（NaNは除外）

    Returns:
        TTestResult
    """
    values = np.asarray(samples, dtype=float)
    values = values[np.isfinite(values)]
    n = int(values.size)
    mean = float(values.mean()) if n else 0.0
    std = float(values.std(ddof=1)) if n >= 2 else 0.0

    if n < 2 or std == 0.0:
        return TTestResult(t_stat=0.0, p_value=0.5, n=n, mean=mean, std=std, degenerate=True)

    result = stats.ttest_1samp(values, 0.0, alternative="greater")
    return TTestResult(
        t_stat=float(result.statistic),
        p_value=float(np.clip(result.pvalue, 0.0, 1.0)),
        n=n,
        mean=mean,
        std=std,
    )


def summarize_outperformance(
    benchmark: int, samples: np.ndarray, significance_level: float = 0.01
) -> BenchmarkOutperformance:
    """
    ベンチマークごとの超過収益を集計する（NaN は除外数として数える）

    Args:
        benchmark: ベンチマーク番号
        samples: パスごとの超過収益
        significance_level: 有意水準

    Returns:
        BenchmarkOutperformance
    """
    values = np.asarray(samples, dtype=float)
    test = one_sided_t_test(values)
    return BenchmarkOutperformance(
        benchmark=benchmark,
        mean=test.mean,
        std=test.std,
        t_stat=test.t_stat,
        p_value=test.p_value,
        n_effective=test.n,
        n_excluded=int(values.size - test.n),
        degenerate=test.degenerate,
        significant=(not test.degenerate) and test.p_value < significance_level,
    )


def summarize_arm(arm: str, wealth: np.ndarray, blown_up: np.ndarray) -> ArmPerformance:
    """発散パスを除いた終端資産の平均と標準偏差"""
    values = np.asarray(wealth, dtype=float)[~np.asarray(blown_up, dtype=bool)]
    values = values[np.isfinite(values)]
    return ArmPerformance(
        arm=arm,
        mean=float(values.mean()) if values.size else 0.0,
        std=float(values.std(ddof=1)) if values.size >= 2 else 0.0,
        n_effective=int(values.size),
        n_blowups=int(np.count_nonzero(blown_up)),
    )
