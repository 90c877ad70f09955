"""
Path command - Simulate one path (and optional percentile bands)
"""

from argparse import Namespace
from typing import Any

import numpy as np

from ...analytics import estimator_gap_profile, externalisation_profile, percentile_bands
from ...reporting import write_bands_csv, write_path_csv
from ...sim import MarketSimulator, simulate_path
from ...utils.logger import get_logger
from .base import BaseCommand

logger = get_logger("brokersim.cli.path")

BAND_FIELDS = (
    "S",
    "alpha",
    "alpha_hat_price",
    "alpha_hat_flow",
    "alpha_hat_naive",
    "nu_hat",
    "nu",
    "eta",
    "xi",
    "QB",
    "QI",
)


class PathCommand(BaseCommand):
    """単一パス出力コマンド"""

    def benchmark_overrides(self, benchmark: str) -> dict[str, Any]:
        if benchmark == "all":
            return {}
        return {"strategy.broker_mode": f"benchmark{benchmark}"}

    def execute(self, args: Namespace) -> int:
        app = self.create_app(args)
        config = app.config
        model = app.solve()
        out = app.output_dir
        path_index = getattr(args, "path_index", 0)

        result = simulate_path(
            config.model,
            model.trader,
            model.broker,
            model.flow,
            config.strategy,
            path_index=path_index,
        )
        variances = [model.trader.vI, model.broker.vB]
        if model.flow is not None:
            variances.append(model.flow.valt)
        target = write_path_csv(out / f"path_{path_index}.csv", result, variances)
        logger.info(f"パスを書き出しました: {target} (終端資産 {result.terminal_wealth:.6g})")

        n_bands = config.output.band_paths
        if n_bands > 0:
            simulator = MarketSimulator(config.model, model.trader, model.broker, model.flow)
            batch = simulator.run(config.strategy, list(range(n_bands)))
            bands = percentile_bands(batch, BAND_FIELDS)
            bands["externalisation_median"] = np.asarray(externalisation_profile(batch).values)
            if model.flow is not None:
                for stat, values in estimator_gap_profile(batch).items():
                    bands[f"estimator_gap_{stat}"] = values
            target = write_bands_csv(out / "bands.csv", config.grid.times, bands)
            logger.info(f"パーセンタイル帯を書き出しました: {target} ({n_bands} パス)")
        return 0
