"""
Experiment command - Monte Carlo comparison against the benchmarks
"""

from argparse import Namespace

from ...profiling import ProfileRecorder
from ...reporting import ExperimentReporter
from ...utils.logger import get_logger
from .base import BaseCommand

logger = get_logger("brokersim.cli.experiment")


class ExperimentCommand(BaseCommand):
    """モンテカルロ実験コマンド"""

    def execute(self, args: Namespace) -> int:
        ProfileRecorder.reset_global()
        app = self.create_app(args)
        config = app.config

        result = app.run_experiment()
        reporter = ExperimentReporter(app.output_dir)
        reporter.write_report(
            result.report,
            markdown=config.output.markdown,
            profile=app.profile_summary(),
            significance_level=config.experiment.significance_level,
        )
        reporter.write_metrics(result.metrics)
        return 0
