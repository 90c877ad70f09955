#!/usr/bin/env python3
"""
ブローカー・情報トレーダーのフィルタリングゲームのシミュレーター
"""

from pathlib import Path
import sys
from typing import Any

from .cli import CommandRunner, create_parser
from .config_manager import ConfigManager
from .models import RunConfig
from .profiling import ProfileContext, ProfileRecorder
from .sim.experiment import ExperimentResult, SolvedModel, run_experiment, solve_model
from .utils.logger import get_logger

logger = get_logger("brokersim")


class BrokerSim:
    """設定の読み込みから係数の求解・実験までをまとめるメインクラス"""

    def __init__(self, config_path: Path | None = None, overrides: dict[str, Any] | None = None):
        """
        初期化

        Args:
            config_path: 設定ファイルのパス（Noneの場合はデフォルト設定）
            overrides: ドット記法の設定上書き（例: {'model.c_belief': 0.5}）

        Raises:
            ConfigError: 設定が不正な場合
        """
        self.config_manager = ConfigManager(config_path)
        if overrides:
            self.config_manager.update_config(overrides)
        self._model: SolvedModel | None = None

    @property
    def config(self) -> RunConfig:
        return self.config_manager.get_config()

    @property
    def output_dir(self) -> Path:
        return Path(self.config.output.directory)

    def profile(self, stage: str) -> ProfileContext:
        """設定で有効な場合だけ測定するコンテキスト"""
        return ProfileContext(stage, enabled=self.config.profiling.enabled)

    def solve(self) -> SolvedModel:
        """
        係数を解く（結果はキャッシュする）

        Returns:
            SolvedModel
        """
        if self._model is None:
            with self.profile("solve"):
                self._model = solve_model(
                    self.config.model, self.config.grid, self.config.solver.admissibility
                )
        return self._model

    def run_experiment(self) -> ExperimentResult:
        """設定どおりにモンテカルロ実験を実行"""
        model = self.solve()
        with self.profile("experiment"):
            return run_experiment(self.config.model, self.config, model=model)

    def profile_summary(self):
        """プロファイリングが有効なら集計を返す"""
        if not self.config.profiling.enabled:
            return None
        return ProfileRecorder.get_global().get_summary()


def run_cli(argv: list[str] | None = None) -> int:
    """
    コマンドラインインターフェースを実行

    Returns:
        終了コード
    """
    parser = create_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) is None:
        parser.print_help()
        return 2
    runner = CommandRunner()
    return runner.run(args)


def main():
    """メインエントリーポイント"""
    try:
        sys.exit(run_cli())
    except Exception as e:
        logger.error(f"Error: {e}", exc_info=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
