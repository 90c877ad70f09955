"""
実験結果の書き出し（JSON / CSV / Markdown）
"""

from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from ..analytics.stress import STRESS_HEADER, stress_rows
from ..models.report import ExperimentReport, StressReport
from ..numerics import DeterministicTable
from ..profiling import ProfileSummary
from ..utils.file_utils import write_csv, write_json
from ..utils.logger import get_logger
from .template_service import TemplateService

if TYPE_CHECKING:
    from ..sim.simulator import PathResult

logger = get_logger("brokersim.reporting")

REPORT_HEADER = ["benchmark", "mean", "std", "t_stat", "p_value", "n_effective", "significant"]
RAW_HEADER = ["arm", "mean", "std", "n_effective", "n_blowups"]
MARKDOWN_TEMPLATE = "experiment_report.md.j2"


class ExperimentReporter:
    """実験レポートを出力ディレクトリに書き出すクラス"""

    def __init__(self, output_dir: Path, template_service: TemplateService | None = None):
        """
        初期化

        Args:
            output_dir: 出力ディレクトリ
            template_service: Markdown用のテンプレートサービス
        """
        self.output_dir = output_dir
        self.template_service = template_service or TemplateService()

    def write_report(
        self,
        report: ExperimentReport,
        prefix: str = "experiment",
        markdown: bool = True,
        profile: ProfileSummary | None = None,
        significance_level: float = 0.01,
    ) -> list[Path]:
        """
        レポートのJSON・CSV・Markdownを書き出す

        Args:
            report: 実験レポート
            prefix: ファイル名の接頭辞
            markdown: Markdownサマリーも書き出すか
            profile: プロファイル集計（Markdownに含める）
            significance_level: Markdownに表示する有意水準

        Returns:
            書き出したファイルのパス
        """
        written = [
            write_json(self.output_dir / f"{prefix}.json", report.model_dump(mode="json")),
            write_csv(self.output_dir / f"{prefix}.csv", REPORT_HEADER, self.report_rows(report)),
            write_csv(
                self.output_dir / f"{prefix}_raw.csv",
                RAW_HEADER,
                [[r.arm, r.mean, r.std, r.n_effective, r.n_blowups] for r in report.raw_performance],
            ),
        ]
        if markdown:
            context = report.model_dump()
            context["significance_level"] = significance_level
            context["profile"] = profile.model_dump() if profile else None
            path = self.output_dir / f"{prefix}.md"
            path.write_text(self.template_service.render(MARKDOWN_TEMPLATE, context), encoding="utf-8")
            written.append(path)
        if profile is not None:
            written.append(
                write_json(self.output_dir / f"{prefix}_profile.json", profile.model_dump(mode="json"))
            )
        logger.info(f"レポートを書き出しました: {', '.join(p.name for p in written)}")
        return written

    @staticmethod
    def report_rows(report: ExperimentReport) -> list[list[object]]:
        return [
            [r.benchmark, r.mean, r.std, r.t_stat, r.p_value, r.n_effective, r.significant]
            for r in report.outperformance
        ]

    def write_metrics(self, metrics: dict[str, np.ndarray], name: str = "paths.csv") -> Path:
        """パスごとの指標を1行1パスで書き出す"""
        header = ["path", *sorted(metrics)]
        n = len(next(iter(metrics.values())))
        rows = [[i, *(metrics[key][i] for key in header[1:])] for i in range(n)]
        return write_csv(self.output_dir / name, header, rows)

    def write_stress(self, report: StressReport, markdown: bool = False) -> list[Path]:
        """
        ストレステストの結合CSV・JSONとセルごとのレポートを書き出す

        Returns:
            書き出したファイルのパス
        """
        written = [
            write_csv(self.output_dir / "stress.csv", STRESS_HEADER, stress_rows(report)),
            write_json(self.output_dir / "stress.json", report.model_dump(mode="json")),
        ]
        for cell in report.cells:
            written.extend(
                self.write_report(
                    cell.report,
                    prefix=f"stress_{cell.parameter}_x{cell.multiplier:g}",
                    markdown=markdown,
                    significance_level=report.significance_level,
                )
            )
        return written


def write_path_csv(
    path: Path, result: "PathResult", variances: list[DeterministicTable]
) -> Path:
    """
    1本のパスの時系列を書き出す

    Args:
        path: 出力先
        result: パスの結果
        variances: 同じグリッド上の分散テーブル（V^I, V^B, V^alt）

    Returns:
        書き出したパス
    """
    columns: dict[str, np.ndarray] = {"t": result.grid.times}
    columns.update(result.series)
    for table in variances:
        columns.update(table.columns())
    header = list(columns)
    rows = np.column_stack([columns[h] for h in header]).tolist()
    return write_csv(path, header, rows)


def write_bands_csv(path: Path, times: np.ndarray, bands: dict[str, np.ndarray]) -> Path:
    """パーセンタイル帯を 't, field_p5, field_p50, field_p95, ...' で書き出す"""
    header = ["t", *bands]
    rows = np.column_stack([times, *bands.values()]).tolist()
    return write_csv(path, header, rows)
