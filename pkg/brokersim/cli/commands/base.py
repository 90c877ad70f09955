"""
Base command class for CLI commands
"""

from abc import ABC, abstractmethod
from argparse import Namespace
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from ...brokersim import BrokerSim

# 引数名 → 設定のドット記法キー
OPTION_KEYS = {
    "seed": "strategy.seed",
    "paths": "experiment.paths",
    "mode": "strategy.signal_source",
    "c_belief": "model.c_belief",
    "threads": "experiment.threads",
    "bands": "output.band_paths",
    "parameters": "stress.parameters",
    "multipliers": "stress.multipliers",
}


class BaseCommand(ABC):
    """コマンドハンドラーの基底クラス"""

    @abstractmethod
    def execute(self, args: Namespace) -> int:
        """
        コマンドを実行

        Args:
            args: コマンドライン引数

        Returns:
            終了コード（0=成功）
        """
        pass

    def benchmark_overrides(self, benchmark: str) -> dict[str, Any]:
        """--benchmark の解釈（既定は比較対象の選択）"""
        return {"experiment.benchmarks": [1, 2, 3] if benchmark == "all" else [int(benchmark)]}

    def collect_overrides(self, args: Namespace) -> dict[str, Any]:
        """コマンドライン引数から設定の上書きを組み立てる"""
        overrides: dict[str, Any] = {}
        for option, key in OPTION_KEYS.items():
            value = getattr(args, option, None)
            if value is not None:
                overrides[key] = value
        if getattr(args, "mispecify_qi", False):
            overrides["strategy.mispecify_qi"] = "normal"
        if getattr(args, "out_dir", None) is not None:
            overrides["output.directory"] = str(args.out_dir)
        if getattr(args, "profile", False):
            overrides["profiling.enabled"] = True
        benchmark = getattr(args, "benchmark", None)
        if benchmark is not None:
            overrides.update(self.benchmark_overrides(benchmark))
        return overrides

    def create_app(self, args: Namespace) -> "BrokerSim":
        """設定を読み込んで BrokerSim を作る"""
        from ... import BrokerSim

        return BrokerSim(getattr(args, "config", None), self.collect_overrides(args))
