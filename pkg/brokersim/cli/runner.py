"""
CLI Command Runner - Orchestrates command execution
"""

from argparse import Namespace

from ..utils.exceptions import BrokerSimError, ConfigError, NumericalError
from ..utils.logger import get_logger
from .commands import (
    BaseCommand,
    CoeffsCommand,
    DiagCommand,
    ExperimentCommand,
    PathCommand,
    StressCommand,
)

logger = get_logger("brokersim.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class CommandRunner:
    """コマンド実行を管理するオーケストレーター"""

    def __init__(self):
        self._commands: dict[str, type[BaseCommand]] = {
            "coeffs": CoeffsCommand,
            "diag": DiagCommand,
            "path": PathCommand,
            "experiment": ExperimentCommand,
            "stress": StressCommand,
        }

    def run(self, args: Namespace) -> int:
        """
        コマンドを実行して終了コードを返す

        Args:
            args: 解析済みのコマンドライン引数

        Returns:
            0: 成功、2: 設定の検証エラー、3: 数値計算の失敗、1: その他
        """
        command_name = getattr(args, "command", None)
        command_class = self._commands.get(command_name or "")
        if not command_class:
            logger.error(f"Unknown command: {command_name}")
            return EXIT_VALIDATION

        try:
            return command_class().execute(args)
        except ConfigError as e:
            logger.error(f"設定エラー: {e}")
            return EXIT_VALIDATION
        except NumericalError as e:
            logger.error(f"数値計算エラー [{e.error_code}] (t={e.t}): {e}")
            return EXIT_NUMERICAL
        except BrokerSimError as e:
            logger.error(f"Error executing command '{command_name}': {e}")
            return EXIT_FAILURE
        except Exception as e:
            logger.error(f"Error executing command '{command_name}': {e}", exc_info=True)
            return EXIT_FAILURE
