"""
市場シミュレーターのテスト
"""

import numpy as np
import pytest

from brokersim.models import StrategyConfig, TimeGrid
from brokersim.sim import (
    SERIES_FIELDS,
    MarketSimulator,
    benchmark_control,
    draw_batch_noise,
    simulate_path,
)
from brokersim.utils.exceptions import SimulationBlowupError


@pytest.fixture(scope="module")
def batch(solved_model):
    """既定パラメータ・価格フィルタでの8パス"""
    simulator = MarketSimulator(
        solved_model.params, solved_model.trader, solved_model.broker, solved_model.flow
    )
    return simulator.run(StrategyConfig(seed=11), list(range(8)))


def _running_integral(values: np.ndarray, dt: float) -> np.ndarray:
    """左端点の和 Σ_{j<k} values_j dt（先頭は 0）"""
    cumulative = np.cumsum(values[:-1] * dt, axis=0)
    return np.concatenate([np.zeros((1, *values.shape[1:])), cumulative])


class TestBookkeeping:
    """在庫と現金の恒等式のテスト"""

    def test_inventory_identity(self, batch):
        """Q^B - ∫ν + (Q^I - Q^I_0) + ∫ξ = 0"""
        dt = batch.grid.dt
        residual = (
            batch["QB"]
            - _running_integral(batch["nu"], dt)
            + (batch["QI"] - batch["QI"][0])
            + _running_integral(batch["xi"], dt)
        )
        assert np.max(np.abs(residual)) < 1e-10

    def test_cash_identity(self, batch, default_params):
        """X^B + X^I + ∫ν(S + aν) - ∫ξ(S + cξ) = 0"""
        dt = batch.grid.dt
        S = batch["S"]
        broker_leg = batch["nu"] * (S + default_params.broker_cost * batch["nu"])
        flow_leg = batch["xi"] * (S + default_params.flow_cost * batch["xi"])
        residual = (
            batch["XB"]
            + batch["XI"]
            + _running_integral(broker_leg, dt)
            - _running_integral(flow_leg, dt)
        )
        scale = max(1.0, float(np.max(np.abs(batch["XB"]))))
        assert np.max(np.abs(residual)) < 1e-8 * scale

    def test_series_shapes(self, batch):
        assert set(batch.series) == set(SERIES_FIELDS)
        for values in batch.series.values():
            assert values.shape == (len(batch.grid), 8)
        assert not np.any(batch.blown_up)


class TestControls:
    """制御の分解と戦略の切り替えのテスト"""

    def test_broker_components_sum(self, batch):
        parts = batch["nu_qB"] + batch["nu_alpha"] + batch["nu_xi"] + batch["nu_qI"]
        assert np.allclose(parts, batch["nu"], rtol=1e-12, atol=1e-12)

    def test_trader_components_sum(self, batch):
        parts = batch["eta_alpha"] + batch["eta_nu"] + batch["eta_qI"]
        assert np.allclose(parts, batch["eta"], rtol=1e-12, atol=1e-12)

    def test_broker_believes_zero_initial_inventory(self, batch):
        """誤認なしでは Q^I と信念は一致する"""
        assert np.array_equal(batch["QI"], batch["qI_belief"])

    def test_common_random_numbers(self, solved_model):
        """同じパス番号なら戦略に関係なく α と ξ は同じ"""
        simulator = MarketSimulator(solved_model.params, solved_model.trader, solved_model.broker)
        noise, qI0 = draw_batch_noise(3, [0, 1], solved_model.trader.grid.steps)
        optimal = simulator.run(StrategyConfig(), [0, 1], noise, qI0)
        twap = simulator.run(StrategyConfig(broker_mode="benchmark2"), [0, 1], noise, qI0)
        assert np.array_equal(optimal["alpha"], twap["alpha"])
        assert np.array_equal(optimal["xi"], twap["xi"])
        assert not np.array_equal(optimal["S"], twap["S"])

    def test_mispecified_inventory(self, solved_model):
        """誤認モードでは Q^I - 信念 = Q^I_0 が一定、最後は在庫解消に切り替わる"""
        simulator = MarketSimulator(
            solved_model.params, solved_model.trader, solved_model.broker, solved_model.flow
        )
        config = StrategyConfig(seed=5, mispecify_qi="normal", unwind_steps=10)
        result = simulator.run(config, [0, 1, 2])
        gap = result["QI"] - result["qI_belief"]
        assert np.allclose(gap, result.qI0[None, :], atol=1e-12)
        assert np.all(result.qI0 != 0.0)

        grid = result.grid
        k = grid.steps - 5
        remaining = grid.horizon - grid.times[k]
        assert np.allclose(result["nu"][k], -result["QB"][k] / remaining)

        components = result["nu_qB"] + result["nu_alpha"] + result["nu_xi"] + result["nu_qI"]
        assert np.max(np.abs(components - result["nu"])) < 1e-12
        unwind = slice(grid.steps - config.unwind_steps, None)
        assert np.array_equal(result["nu_qB"][unwind], result["nu"][unwind])
        assert np.all(result["nu_alpha"][unwind] == 0.0)


class TestBenchmarks:
    """ベンチマーク戦略のテスト"""

    def test_formulas(self):
        grid = TimeGrid(horizon=1.0, steps=100)
        state = {"eta": 2.0, "QB": 4.0, "xi": -1.0}
        assert benchmark_control(1, 0.5, state, grid) == pytest.approx(2.0 - 8.0)
        assert benchmark_control(2, 0.5, state, grid) == pytest.approx(-8.0)
        assert benchmark_control(3, 0.5, state, grid) == pytest.approx(1.0)
        assert benchmark_control("benchmark2", 0.5, state, grid) == pytest.approx(-8.0)

    def test_terminal_denominator(self):
        """t=T では T - t を dt で置き換える"""
        grid = TimeGrid(horizon=1.0, steps=100)
        state = {"eta": 0.0, "QB": 1.0, "xi": 0.0}
        assert benchmark_control(2, 1.0, state, grid) == pytest.approx(-100.0)

    def test_unknown_kind(self):
        grid = TimeGrid(steps=10)
        state = {"eta": 0.0, "QB": 0.0, "xi": 0.0}
        with pytest.raises(ValueError):
            benchmark_control(4, 0.0, state, grid)
        with pytest.raises(ValueError):
            benchmark_control("optimal", 0.0, state, grid)

    def test_zero_noise_stays_flat(self, solved_model):
        """雑音なし・α_0 = 0 のパスでは何も動かない"""
        grid = solved_model.trader.grid
        simulator = MarketSimulator(solved_model.params, solved_model.trader, solved_model.broker)
        noise = np.zeros((grid.steps, 1, 3))
        result = simulator.run(StrategyConfig(broker_mode="benchmark1"), [0], noise, np.zeros(1))
        # α=ν̂=Q^I=0 なので η* = 0、ξ = 0 で在庫は動かない
        assert np.all(result["QB"] == 0.0)
        assert np.all(result["eta"] == 0.0)


class TestSimulatePath:
    """simulate_path のテスト"""

    def test_matches_batch_column(self, solved_model, batch):
        """単一パスはバッチの同じ列と一致する"""
        path = simulate_path(
            solved_model.params,
            solved_model.trader,
            solved_model.broker,
            solved_model.flow,
            StrategyConfig(seed=11),
            path_index=3,
        )
        column = batch.path(3)
        assert path.path_index == 3
        for name in ("S", "QB", "XB", "alpha_hat_flow"):
            assert np.allclose(path[name], column[name], rtol=1e-12, atol=1e-12)
        assert path.terminal_wealth == pytest.approx(column.terminal_wealth)

    def test_blowup_reports_step(self, solved_model):
        """非有限値は SimulationBlowupError としてステップ番号を返す"""
        grid = solved_model.trader.grid
        noise = np.zeros((grid.steps, 3))
        noise[5, 0] = np.nan
        with pytest.raises(SimulationBlowupError) as excinfo:
            simulate_path(
                solved_model.params,
                solved_model.trader,
                solved_model.broker,
                None,
                StrategyConfig(),
                noise=noise,
            )
        assert excinfo.value.step == 6
        assert excinfo.value.t == pytest.approx(grid.times[6])

    def test_explicit_seed_overrides_config(self, solved_model):
        kwargs = {
            "params": solved_model.params,
            "trader": solved_model.trader,
            "broker": solved_model.broker,
            "flow": None,
            "config": StrategyConfig(seed=1),
        }
        a = simulate_path(**kwargs, seed=2)
        b = simulate_path(**kwargs)
        assert not np.array_equal(a["S"], b["S"])
