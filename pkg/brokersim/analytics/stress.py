"""
学習パラメータのストレステスト

エージェントのモデル（フィルタと係数ODE）だけをストレスし、
真の市場は基準パラメータのまま動かす。
"""

from ..models.config import RunConfig, StressSettings
from ..models.params import LEARNING_PARAMETERS, ModelParams
from ..models.report import StressCell, StressReport
from ..utils.logger import get_logger

logger = get_logger("brokersim.analytics.stress")

STRESS_HEADER = ["parameter", "multiplier", "benchmark", "mean", "std", "p_value", "cell"]


def stress_runner(
    base_params: ModelParams,
    settings: StressSettings,
    config: RunConfig,
    n_paths: int | None = None,
    base_seed: int | None = None,
) -> StressReport:
    """
    パラメータ × 倍率の各セルで実験を実行する

    Args:
        base_params: 真の市場パラメータ
        settings: ストレス対象と倍率
        config: 実験設定
        n_paths: パス数（省略時は設定値）
        base_seed: ベースシード（省略時は設定値）

    Returns:
        StressReport
    """
    from ..sim.experiment import run_experiment

    cells: list[StressCell] = []
    for name in settings.parameters:
        if name not in LEARNING_PARAMETERS:
            raise ValueError(f"not a learning parameter: {name}")
        for multiplier in settings.multipliers:
            logger.info(f"ストレスセル: {name} x {multiplier}")
            model_params = base_params.scaled(name, multiplier)
            result = run_experiment(
                base_params,
                config,
                n_paths=n_paths,
                base_seed=base_seed,
                model_params=model_params,
            )
            cells.append(StressCell(parameter=name, multiplier=multiplier, report=result.report))
    return StressReport(cells=cells, significance_level=config.experiment.significance_level)


def format_stress_cell(mean: float, std: float, p_value: float, significance_level: float) -> str:
    """'38 (356)*' 形式のセル表記（有意なら '*' を付ける）"""
    marker = "*" if p_value < significance_level else ""
    return f"{mean:.0f} ({std:.0f}){marker}"


def stress_rows(report: StressReport) -> list[list[object]]:
    """ストレス結果を結合CSVの行に展開する"""
    rows: list[list[object]] = []
    for cell in report.cells:
        for row in cell.report.outperformance:
            rows.append(
                [
                    cell.parameter,
                    cell.multiplier,
                    row.benchmark,
                    row.mean,
                    row.std,
                    row.p_value,
                    format_stress_cell(
                        row.mean, row.std, row.p_value, report.significance_level
                    ),
                ]
            )
    return rows
