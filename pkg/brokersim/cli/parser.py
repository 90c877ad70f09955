"""
CLI Argument Parser
"""

import argparse
from pathlib import Path

BENCHMARK_CHOICES = ["1", "2", "3", "all"]
SIGNAL_CHOICES = ["price", "flow", "naive"]


def _float_list(value: str) -> list[float]:
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"comma separated numbers expected: {value}") from e


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="設定ファイルのパス（TOML/YAML）")
    common.add_argument("--seed", type=int, help="ベースシード")
    common.add_argument("--paths", type=int, help="シミュレーション本数")
    common.add_argument("--mode", choices=SIGNAL_CHOICES, help="最適戦略が使う α 推定量")
    common.add_argument("--benchmark", choices=BENCHMARK_CHOICES, help="ベンチマーク（all で全て）")
    common.add_argument(
        "--mispecify-qi", action="store_true", help="トレーダー初期在庫を Q^I_0 ~ N(0,1) にする"
    )
    common.add_argument("--c-belief", type=float, help="ブローカーの二次的信念 c")
    common.add_argument("--out-dir", type=Path, help="出力ディレクトリ")
    common.add_argument("--threads", type=int, help="ワーカー数の上限（デフォルト: 全コア）")
    return common


def create_parser() -> argparse.ArgumentParser:
    """
    Create and configure the CLI argument parser

    Returns:
        Configured ArgumentParser instance
    """
    try:
        from .. import __version__
    except (ImportError, ValueError, SystemError):
        __version__ = "0.0.0"

    parser = argparse.ArgumentParser(
        prog="brokersim",
        description="ブローカーと情報トレーダーのフィルタリングゲームのシミュレーター",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = _common_options()
    subparsers = parser.add_subparsers(dest="command", help="実行するコマンド")

    subparsers.add_parser(
        "coeffs", parents=[common], help="トレーダー・ブローカー・フローフィルタの係数CSVを出力"
    )

    diag_parser = subparsers.add_parser(
        "diag", parents=[common], help="存在条件の固有値診断と外部化率のスイープを出力"
    )
    diag_parser.add_argument(
        "--kappa-sweep",
        type=_float_list,
        default=[2.5, 5.0, 7.5],
        help="実効外部化率を比較する κ^α（カンマ区切り、デフォルト: 2.5,5,7.5）",
    )
    diag_parser.add_argument(
        "--c-belief-sweep",
        type=_float_list,
        help="フィードバックを比較する c_belief（カンマ区切り、例: 0,0.5,1）",
    )

    path_parser = subparsers.add_parser(
        "path", parents=[common], help="1本のパスの時系列（とパーセンタイル帯）を出力"
    )
    path_parser.add_argument("--path-index", type=int, default=0, help="パス番号（デフォルト: 0）")
    path_parser.add_argument(
        "--bands", type=int, help="パーセンタイル帯に使うパス数（0で無効）"
    )

    experiment_parser = subparsers.add_parser(
        "experiment", parents=[common], help="ベンチマークとのモンテカルロ比較"
    )
    experiment_parser.add_argument(
        "--profile", action="store_true", help="各段階の実行時間とメモリを記録"
    )

    stress_parser = subparsers.add_parser(
        "stress", parents=[common], help="学習パラメータのストレステスト"
    )
    stress_parser.add_argument(
        "--parameters", nargs="+", help="ストレス対象（kappa_alpha sigma_alpha theta_b sigma_b）"
    )
    stress_parser.add_argument("--multipliers", type=_float_list, help="倍率（例: 0.5,1.5）")

    return parser
