"""
Stress command - Stress the agents' learning parameters
"""

from argparse import Namespace

from ...analytics import stress_runner
from ...reporting import ExperimentReporter
from ...utils.logger import get_logger
from .base import BaseCommand

logger = get_logger("brokersim.cli.stress")


class StressCommand(BaseCommand):
    """ストレステストコマンド"""

    def execute(self, args: Namespace) -> int:
        app = self.create_app(args)
        config = app.config
        report = stress_runner(config.model, config.stress, config)
        written = ExperimentReporter(app.output_dir).write_stress(
            report, markdown=config.output.markdown
        )
        logger.info(f"ストレステストの結果を {len(written)} ファイルに書き出しました")
        return 0
