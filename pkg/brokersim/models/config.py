"""Configuration related Pydantic models."""

from __future__ import annotations

from enum import Enum
from pathlib import Path

from pydantic import Field, field_validator

from .base import BrokerSimBaseModel
from .params import LEARNING_PARAMETERS, ModelParams, TimeGrid


class BrokerMode(str, Enum):
    """ブローカーの戦略"""

    OPTIMAL = "optimal"
    BENCHMARK1 = "benchmark1"
    BENCHMARK2 = "benchmark2"
    BENCHMARK3 = "benchmark3"


class SignalSource(str, Enum):
    """最適戦略が使う α の推定量"""

    PRICE = "price"
    FLOW = "flow"
    NAIVE = "naive"


class QIMispecification(str, Enum):
    """トレーダー初期在庫の誤認モード"""

    OFF = "off"
    NORMAL = "normal"


class StrategyConfig(BrokerSimBaseModel):
    """1本のパスで使うブローカー戦略の設定"""

    broker_mode: BrokerMode = Field(default=BrokerMode.OPTIMAL, description="ブローカーの戦略")
    signal_source: SignalSource = Field(
        default=SignalSource.PRICE, description="最適戦略が使う α 推定量（ベンチマークでは無視）"
    )
    mispecify_qi: QIMispecification = Field(
        default=QIMispecification.OFF, description="Q^I_0 ~ N(0,1) の誤認モード"
    )
    unwind_steps: int = Field(
        default=10, ge=0, description="誤認モード時に最終ステップで在庫解消に切り替えるステップ数"
    )
    seed: int = Field(default=42, ge=0, description="乱数シード")


class ExperimentSettings(BrokerSimBaseModel):
    """モンテカルロ実験の設定"""

    paths: int = Field(default=10_000, ge=1, description="シミュレーション本数")
    benchmarks: list[int] = Field(default_factory=lambda: [1, 2, 3], description="比較するベンチマーク")
    threads: int | None = Field(default=None, ge=1, description="ワーカー数（Noneは全コア）")
    batch_size: int = Field(default=500, ge=1, description="ベクトル化するパス数")
    significance_level: float = Field(default=0.01, gt=0.0, lt=1.0, description="有意水準")
    compare_estimators: bool = Field(
        default=False, description="同じ乱数でフロー推定量と価格推定量の最適戦略を比較するか"
    )

    @field_validator("benchmarks")
    @classmethod
    def _check_benchmarks(cls, value: list[int]) -> list[int]:
        unknown = sorted(set(value) - {1, 2, 3})
        if unknown:
            raise ValueError(f"unknown benchmark(s): {unknown}")
        return sorted(set(value))


class StressSettings(BrokerSimBaseModel):
    """ストレステストの設定"""

    parameters: list[str] = Field(
        default_factory=lambda: list(LEARNING_PARAMETERS), description="ストレス対象のパラメータ"
    )
    multipliers: list[float] = Field(default_factory=lambda: [0.5, 1.5], description="倍率")

    @field_validator("parameters")
    @classmethod
    def _check_parameters(cls, value: list[str]) -> list[str]:
        unknown = [name for name in value if name not in LEARNING_PARAMETERS]
        if unknown:
            raise ValueError(f"not a learning parameter: {unknown}")
        return value

    @field_validator("multipliers")
    @classmethod
    def _check_multipliers(cls, value: list[float]) -> list[float]:
        if any(m <= 0 for m in value):
            raise ValueError("multipliers must be positive")
        return value


class OutputSettings(BrokerSimBaseModel):
    """出力先の設定"""

    directory: Path = Field(default=Path("results"), description="出力ディレクトリ")
    band_paths: int = Field(default=0, ge=0, description="パーセンタイル帯に使うパス数（0は単一パス）")
    markdown: bool = Field(default=True, description="Markdownサマリーを出力するか")


class SolverSettings(BrokerSimBaseModel):
    """係数ソルバーの設定"""

    admissibility: str = Field(default="error", pattern="^(error|warn)$", description="1+b f3>0 違反時の扱い")


class ProfilingSettings(BrokerSimBaseModel):
    """プロファイリング設定"""

    enabled: bool = False


class DebugSettings(BrokerSimBaseModel):
    """デバッグ設定"""

    enabled: bool = False


class RunConfig(BrokerSimBaseModel):
    """実行全体の設定（設定ファイルのルート）"""

    model: ModelParams = Field(default_factory=ModelParams)
    grid: TimeGrid = Field(default_factory=TimeGrid)
    strategy: StrategyConfig = Field(default_factory=StrategyConfig)
    experiment: ExperimentSettings = Field(default_factory=ExperimentSettings)
    stress: StressSettings = Field(default_factory=StressSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)
    solver: SolverSettings = Field(default_factory=SolverSettings)
    profiling: ProfilingSettings = Field(default_factory=ProfilingSettings)
    debug: DebugSettings = Field(default_factory=DebugSettings)
