"""
モンテカルロ実験のテスト
"""

from dataclasses import replace

import numpy as np
import pytest

from brokersim.models import ExperimentSettings, RunConfig, StrategyConfig
from brokersim.sim import run_experiment
from brokersim.utils.exceptions import FilterDegeneracyError


def _config(**experiment) -> RunConfig:
    settings = {"paths": 12, "batch_size": 5, "threads": 2, **experiment}
    return RunConfig(experiment=ExperimentSettings(**settings))


class TestRunExperiment:
    """run_experiment のテスト"""

    def test_report_and_metrics(self, default_params, solved_model):
        result = run_experiment(default_params, _config(), model=solved_model)

        report = result.report
        assert [row.benchmark for row in report.outperformance] == [1, 2, 3]
        assert [arm.arm for arm in report.raw_performance] == [
            "optimal",
            "benchmark1",
            "benchmark2",
            "benchmark3",
        ]
        assert report.metadata.n_paths == 12
        assert report.metadata.overrides == {}
        for name in ("out_1", "out_2", "out_3", "wealth_optimal", "naive_flow_gap"):
            assert result.metrics[name].shape == (12,)
        assert report.extras["existence_flagged_points"] == 0

    def test_independent_of_batching(self, default_params, solved_model):
        """バッチ分割とワーカー数は結果に影響しない"""
        a = run_experiment(default_params, _config(batch_size=5, threads=3), model=solved_model)
        b = run_experiment(default_params, _config(batch_size=12, threads=1), model=solved_model)
        for name in ("out_1", "out_2", "out_3"):
            assert np.array_equal(a.metrics[name], b.metrics[name])

    def test_seed_override(self, default_params, solved_model):
        a = run_experiment(default_params, _config(), base_seed=1, model=solved_model)
        b = run_experiment(default_params, _config(), base_seed=2, model=solved_model)
        assert a.report.metadata.base_seed == 1
        assert not np.array_equal(a.metrics["out_2"], b.metrics["out_2"])

    def test_compare_estimators(self, default_params, solved_model):
        result = run_experiment(
            default_params, _config(compare_estimators=True), n_paths=6, model=solved_model
        )
        assert result.metrics["flow_vs_price"].shape == (6,)
        comparison = result.report.extras["flow_vs_price"]
        assert comparison["n"] == int(np.isfinite(result.metrics["flow_vs_price"]).sum())

    def test_stressed_model_is_reported(self, default_params):
        config = _config(benchmarks=[2])
        model_params = default_params.scaled("theta_b", 1.5)
        result = run_experiment(default_params, config, n_paths=4, model_params=model_params)

        assert result.report.metadata.overrides == {"theta_b": pytest.approx(15.0)}
        assert result.report.metadata.params_hash != result.report.metadata.model_params_hash

    def test_flow_source_needs_flow_coefficients(self, default_params, solved_model):
        config = _config().model_copy(update={"strategy": StrategyConfig(signal_source="flow")})
        with pytest.raises(FilterDegeneracyError):
            run_experiment(default_params, config, model=replace(solved_model, flow=None))
