import os
from pathlib import Path

import pytest

# ロガー初期化より前に設定しておく（caplog でログを拾うため）
os.environ["BROKERSIM_TESTING"] = "1"

from brokersim.coefficients import compute_broker_coefficients, compute_trader_coefficients
from brokersim.filters import flow_filter_coefficients
from brokersim.models import ModelParams, TimeGrid
from brokersim.sim import solve_model

PROJECT_ROOT = Path(__file__).parent.parent.resolve()

@pytest.fixture(autouse=True)
def set_test_env():
    """テスト用の環境変数を明示"""
    os.environ["BROKERSIM_TESTING"] = "1"
    yield


@pytest.fixture(scope="session")
def default_params() -> ModelParams:
    """既定のモデルパラメータ"""
    return ModelParams()


@pytest.fixture(scope="session")
def default_grid() -> TimeGrid:
    """既定の N=1000 グリッド"""
    return TimeGrid()


@pytest.fixture(scope="session")
def trader_coeffs(default_params, default_grid):
    """既定パラメータのトレーダー係数"""
    return compute_trader_coefficients(default_params, default_grid)


@pytest.fixture(scope="session")
def broker_coeffs(default_params, trader_coeffs, default_grid):
    """既定パラメータのブローカー係数"""
    return compute_broker_coefficients(default_params, trader_coeffs, default_grid)


@pytest.fixture(scope="session")
def flow_coeffs(trader_coeffs):
    """既定パラメータのフローフィルタ係数"""
    return flow_filter_coefficients(trader_coeffs)


@pytest.fixture(scope="session")
def solved_model(default_params, default_grid):
    """既定グリッドで解いた係数一式"""
    return solve_model(default_params, default_grid)


@pytest.fixture(scope="function")
def small_config_file(tmp_path) -> Path:
    """小さな実験用の設定ファイル（出力は tmp_path/results）"""
    config_path = tmp_path / "config.toml"
    config_path.write_text(
        f"""
[strategy]
seed = 7

[experiment]
paths = 20
batch_size = 10
threads = 2

[output]
directory = "{(tmp_path / 'results').as_posix()}"
""",
        encoding="utf-8",
    )
    return config_path
