"""
Diag command - Existence diagnostic and externalisation sweeps
"""

from argparse import Namespace

import numpy as np

from ...analytics import c_belief_sweep, effective_externalisation, externalisation_sweep
from ...numerics import write_tables_csv
from ...utils.file_utils import write_json
from ...utils.logger import get_logger
from .base import BaseCommand

logger = get_logger("brokersim.cli.diag")


class DiagCommand(BaseCommand):
    """存在条件の診断コマンド"""

    def execute(self, args: Namespace) -> int:
        app = self.create_app(args)
        config = app.config
        model = app.solve()
        out = app.output_dir
        diagnostic = model.broker.eigen_diag
        eigenvalues = np.asarray(diagnostic.eigenvalues.values)

        write_tables_csv(out / "eigenvalues.csv", [diagnostic.eigenvalues])
        write_tables_csv(out / "broker_coeffs.csv", model.broker.tables())
        write_tables_csv(
            out / "effective_externalisation.csv",
            [effective_externalisation(model.trader, model.broker)],
        )

        summary = {
            "grid_points": len(config.grid),
            "flagged_points": diagnostic.flagged_count,
            "max_leading_eigenvalue": float(eigenvalues[:, :3].max()),
            "max_abs_fourth_eigenvalue": float(np.abs(eigenvalues[:, 3]).max()),
            "max_abs_scaled_determinant": float(np.abs(diagnostic.determinants).max()),
            "reduction_gap": model.broker.reduction_gap,
        }

        kappa_values = getattr(args, "kappa_sweep", None)
        if kappa_values:
            tables = externalisation_sweep(config.model, config.grid, "kappa_alpha", kappa_values)
            write_tables_csv(out / "externalisation_sweep.csv", list(tables.values()))
            summary["externalisation_time_average"] = {
                f"{value:g}": float(np.mean(table.values)) for value, table in tables.items()
            }

        c_values = getattr(args, "c_belief_sweep", None)
        if c_values:
            sweep = c_belief_sweep(
                config.model,
                config.grid,
                c_values,
                n_paths=min(config.experiment.paths, 200),
                seed=config.strategy.seed,
            )
            write_tables_csv(out / "c_belief_gains.csv", list(sweep.gains.values()))
            summary["c_belief_spearman"] = {f"{c:g}": rho for c, rho in sweep.spearman.items()}

        write_json(out / "diag_summary.json", summary)
        if diagnostic.flagged_count:
            logger.warning(f"存在条件の診断: {diagnostic.flagged_count} 点にフラグ")
        else:
            logger.info("存在条件の診断: 全グリッド点で条件を満たしています")
        return 0
