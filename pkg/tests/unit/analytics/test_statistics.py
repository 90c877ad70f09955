"""
片側t検定と集計のテスト
"""

import numpy as np
import pytest

from brokersim.analytics import one_sided_t_test, summarize_outperformance
from brokersim.analytics.statistics import summarize_arm


def _standardised(rng, mean: float, std: float, n: int) -> np.ndarray:
    z = rng.standard_normal(n)
    return (z - z.mean()) / z.std(ddof=1) * std + mean


class TestOneSidedTTest:
    """one_sided_t_test のテスト"""

    def test_known_statistic(self, rng):
        """平均 38、標準偏差 354、n=10000 なら t ≈ 10.73"""
        samples = _standardised(rng, 38.0, 354.0, 10_000)
        result = one_sided_t_test(samples)

        assert result.t_stat == pytest.approx(38.0 / (354.0 / 100.0), rel=1e-9)
        assert result.p_value < 1e-6
        assert result.mean == pytest.approx(38.0)
        assert result.std == pytest.approx(354.0)
        assert not result.degenerate

    def test_negative_mean_is_not_significant(self, rng):
        result = one_sided_t_test(_standardised(rng, -5.0, 10.0, 400))
        assert result.t_stat < 0
        assert result.p_value > 0.99

    @pytest.mark.parametrize("samples", [[], [5.0], [1.0, 1.0, 1.0]])
    def test_degenerate(self, samples):
        result = one_sided_t_test(samples)
        assert result.degenerate
        assert result.t_stat == 0.0
        assert result.p_value == 0.5

    def test_nan_excluded(self):
        result = one_sided_t_test([1.0, np.nan, 2.0, 3.0, np.inf])
        assert result.n == 3
        assert result.mean == pytest.approx(2.0)

    def test_p_value_decreases_with_t(self, rng):
        """t 統計量が大きいほど p 値は小さい"""
        results = [
            one_sided_t_test(rng.normal(loc, 1.0, 50)) for loc in rng.uniform(-1.0, 1.0, 30)
        ]
        results.sort(key=lambda r: r.t_stat)
        p_values = [r.p_value for r in results]
        assert all(a >= b for a, b in zip(p_values, p_values[1:], strict=False))


class TestSummaries:
    """集計関数のテスト"""

    def test_summarize_outperformance(self, rng):
        samples = _standardised(rng, 38.0, 354.0, 10_000)
        samples = np.append(samples, [np.nan, np.nan])
        row = summarize_outperformance(2, samples, significance_level=0.01)

        assert row.benchmark == 2
        assert row.n_effective == 10_000
        assert row.n_excluded == 2
        assert row.significant

    def test_degenerate_is_never_significant(self):
        row = summarize_outperformance(1, np.zeros(10))
        assert row.degenerate
        assert not row.significant

    def test_summarize_arm(self):
        wealth = np.array([1.0, 3.0, 100.0, np.nan])
        blown = np.array([False, False, True, False])
        arm = summarize_arm("benchmark1", wealth, blown)

        assert arm.mean == pytest.approx(2.0)
        assert arm.n_effective == 2
        assert arm.n_blowups == 1
