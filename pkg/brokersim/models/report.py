"""
実験結果のデータモデル定義
"""

from datetime import datetime
from typing import Any

from pydantic import BaseModel, Field

REPORT_SCHEMA_VERSION = "1.0"


class TTestResult(BaseModel):
    """片側t検定の結果"""

    t_stat: float = Field(..., description="t統計量")
    p_value: float = Field(..., ge=0.0, le=1.0, description="片側p値 (H1: 平均 > 0)")
    n: int = Field(..., ge=0, description="サンプル数")
    mean: float = Field(..., description="標本平均")
    std: float = Field(..., ge=0.0, description="標本標準偏差 (ddof=1)")
    degenerate: bool = Field(default=False, description="n<2 または標準偏差ゼロ")


class BenchmarkOutperformance(BaseModel):
    """1つのベンチマークに対する超過収益の統計"""

    benchmark: int = Field(..., ge=1, le=3, description="ベンチマーク番号")
    mean: float = Field(..., description="超過収益の平均（取引100万ドルあたりのドル）")
    std: float = Field(..., ge=0.0, description="超過収益の標準偏差")
    t_stat: float = Field(..., description="t統計量")
    p_value: float = Field(..., ge=0.0, le=1.0, description="片側p値")
    n_effective: int = Field(..., ge=0, description="集計に使ったパス数")
    n_excluded: int = Field(default=0, ge=0, description="発散等で除外したパス数")
    degenerate: bool = Field(default=False, description="統計量が退化しているか")
    significant: bool = Field(default=False, description="有意水準で有意か")


class ArmPerformance(BaseModel):
    """戦略アームの生の成績（終端時価評価資産）"""

    arm: str = Field(..., description="アーム名 (optimal / benchmark1..3)")
    mean: float = Field(..., description="X_T + Q_T S_T の平均")
    std: float = Field(..., ge=0.0, description="X_T + Q_T S_T の標準偏差")
    n_effective: int = Field(..., ge=0, description="集計に使ったパス数")
    n_blowups: int = Field(default=0, ge=0, description="発散フラグが立ったパス数")


class ReportMetadata(BaseModel):
    """レポートのメタデータ"""

    schema_version: str = Field(default=REPORT_SCHEMA_VERSION, description="レポートスキーマのバージョン")
    params_hash: str = Field(..., description="真のモデルパラメータのハッシュ")
    model_params_hash: str = Field(..., description="エージェントが使うモデルのハッシュ")
    base_seed: int = Field(..., description="ベースシード")
    n_paths: int = Field(..., ge=1, description="要求したパス数")
    steps: int = Field(..., description="グリッドの区間数")
    horizon: float = Field(..., description="取引期間")
    signal_source: str = Field(..., description="最適戦略の α 推定量")
    mispecify_qi: str = Field(..., description="Q^I_0 誤認モード")
    c_belief: float = Field(..., description="ブローカーの二次的信念")
    overrides: dict[str, float] = Field(default_factory=dict, description="エージェントモデルの上書き")
    created_at: datetime = Field(default_factory=datetime.now, description="作成日時")


class ExperimentReport(BaseModel):
    """モンテカルロ実験のレポート"""

    outperformance: list[BenchmarkOutperformance] = Field(
        default_factory=list, description="ベンチマークごとの超過収益"
    )
    raw_performance: list[ArmPerformance] = Field(default_factory=list, description="アームごとの生の成績")
    metadata: ReportMetadata = Field(..., description="メタデータ")
    extras: dict[str, Any] = Field(default_factory=dict, description="追加の診断値")

    def for_benchmark(self, benchmark: int) -> BenchmarkOutperformance:
        """
        ベンチマーク番号で結果を取得

        Args:
            benchmark: ベンチマーク番号

        Returns:
            該当する統計

        Raises:
            KeyError: 該当ベンチマークが含まれない場合
        """
        for row in self.outperformance:
            if row.benchmark == benchmark:
                return row
        raise KeyError(benchmark)


class StressCell(BaseModel):
    """ストレステストの1セル"""

    parameter: str = Field(..., description="ストレス対象のパラメータ")
    multiplier: float = Field(..., description="倍率")
    report: ExperimentReport = Field(..., description="セルの実験レポート")


class StressReport(BaseModel):
    """ストレステスト全体の結果"""

    cells: list[StressCell] = Field(default_factory=list, description="セルのリスト")
    significance_level: float = Field(..., description="有意マーカーの水準")
