"""
Coeffs command - Export the solved coefficient tables
"""

from argparse import Namespace

from ...numerics import write_tables_csv
from ...utils.logger import get_logger
from .base import BaseCommand

logger = get_logger("brokersim.cli.coeffs")


class CoeffsCommand(BaseCommand):
    """係数CSV出力コマンド"""

    def execute(self, args: Namespace) -> int:
        app = self.create_app(args)
        model = app.solve()
        out = app.output_dir

        written = [
            write_tables_csv(out / "trader_coeffs.csv", model.trader.tables()),
            write_tables_csv(out / "broker_coeffs.csv", model.broker.tables()),
            write_tables_csv(out / "eigenvalues.csv", [model.broker.eigen_diag.eigenvalues]),
        ]
        if model.flow is not None:
            written.append(write_tables_csv(out / "flow_coeffs.csv", model.flow.tables()))

        for path in written:
            logger.info(f"書き出しました: {path}")
        return 0
