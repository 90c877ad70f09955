"""
既定パラメータでのモンテカルロ実験の受け入れテスト（実行に数分かかる）
"""

import numpy as np
import pytest

from brokersim.analytics import (
    c_belief_sweep,
    estimator_gap,
    externalisation_sweep,
    mean_squared_error,
    stress_runner,
)
from brokersim.models import RunConfig, StrategyConfig, StressSettings
from brokersim.sim import MarketSimulator, run_experiment
from tests.helpers import ParamsBuilder

pytestmark = [pytest.mark.integration, pytest.mark.slow]


class TestOutperformance:
    """ベンチマークに対する超過収益"""

    def test_price_filter(self, default_params, solved_model):
        config = RunConfig()
        result = run_experiment(default_params, config, n_paths=10_000, model=solved_model)
        report = result.report

        out1 = report.for_benchmark(1)
        assert abs(out1.mean) <= 17
        assert out1.p_value > 0.05

        out2 = report.for_benchmark(2)
        assert 28 <= out2.mean <= 48
        assert out2.p_value < 0.01

        out3 = report.for_benchmark(3)
        assert 74 <= out3.mean <= 116
        assert out3.p_value < 0.01

    def test_flow_filter(self, default_params, solved_model):
        config = RunConfig.model_validate({"strategy": {"signal_source": "flow"}})
        result = run_experiment(default_params, config, n_paths=10_000, model=solved_model)
        report = result.report

        for benchmark, (low, high) in {1: (32, 40), 2: (66, 90), 3: (111, 143)}.items():
            row = report.for_benchmark(benchmark)
            assert low <= row.mean <= high
            assert row.p_value < 0.01


class TestEstimators:
    """フロー推定量と単純な逆算推定量の比較"""

    def _gap(self, solved_model, mispecify: str) -> np.ndarray:
        simulator = MarketSimulator(
            solved_model.params, solved_model.trader, solved_model.broker, solved_model.flow
        )
        config = StrategyConfig(seed=42, mispecify_qi=mispecify)
        return estimator_gap(simulator.run(config, list(range(1000))))

    def test_naive_matches_flow(self, solved_model):
        assert np.median(self._gap(solved_model, "off")) < 1e-3

    def test_mispecified_inventory_separates(self, solved_model):
        assert np.median(self._gap(solved_model, "normal")) > 1e-2

    def test_flow_filter_has_smaller_error(self, solved_model):
        """フローベースの推定量は95%以上のパスで価格フィルタより二乗誤差が小さい"""
        simulator = MarketSimulator(
            solved_model.params, solved_model.trader, solved_model.broker, solved_model.flow
        )
        batch = simulator.run(StrategyConfig(seed=42), list(range(1000)))
        fraction = np.mean(mean_squared_error(batch, "flow") < mean_squared_error(batch, "price"))
        assert fraction >= 0.95


class TestExternalisation:
    """実効外部化率の κ^α 依存"""

    def test_increases_with_kappa_alpha(self, default_params, default_grid):
        tables = externalisation_sweep(default_params, default_grid, values=(2.5, 5.0, 7.5))
        averages = [float(np.mean(tables[value].values)) for value in (2.5, 5.0, 7.5)]
        assert averages[0] < averages[1] < averages[2]


class TestStress:
    """学習パラメータを ±50% ずらしたモデルでの頑健性"""

    @pytest.fixture(scope="class")
    def stress_report(self, default_params):
        settings = StressSettings(parameters=["theta_b", "kappa_alpha"], multipliers=[0.5, 1.5])
        return stress_runner(default_params, settings, RunConfig(), n_paths=10_000)

    def _cell(self, report, parameter, multiplier):
        return next(
            c.report
            for c in report.cells
            if c.parameter == parameter and c.multiplier == multiplier
        )

    def test_theta_b_up(self, stress_report):
        row = self._cell(stress_report, "theta_b", 1.5).for_benchmark(2)
        assert row.mean > 0
        assert row.p_value < 0.001

    def test_kappa_alpha_down(self, stress_report):
        row = self._cell(stress_report, "kappa_alpha", 0.5).for_benchmark(1)
        assert row.p_value > 0.01
        assert abs(row.mean) < 60

    def test_every_cell_beats_benchmarks_two_and_three(self, stress_report):
        for cell in stress_report.cells:
            for benchmark in (2, 3):
                row = cell.report.for_benchmark(benchmark)
                assert row.mean > 0
                assert row.p_value < 0.01


class TestSecondOrderBelief:
    """c_belief の二次的な効果"""

    def test_gain_difference_against_inventory(self, default_grid):
        params = ParamsBuilder().with_value("beta0_i", 1e-5).with_value("beta0_b", 1e-5).build()
        sweep = c_belief_sweep(params, default_grid, values=(1.0,), n_paths=200, reference=0.0)
        assert sweep.spearman[1.0] < -0.1
