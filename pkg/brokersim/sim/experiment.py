"""
共通乱数によるモンテカルロ実験

同じパス番号では最適戦略と各ベンチマークが同じブラウン運動の増分を共有する。
パスはバッチごとにベクトル化し、バッチはスレッドプールで並列に処理する。
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
import os
from typing import Any

import numpy as np

from ..analytics.metrics import (
    estimator_gap,
    mean_squared_error,
    outperformance_batch,
)
from ..analytics.statistics import one_sided_t_test, summarize_arm, summarize_outperformance
from ..coefficients import (
    BrokerCoefficients,
    TraderCoefficients,
    compute_broker_coefficients,
    compute_trader_coefficients,
)
from ..filters import FlowFilterCoefficients, flow_filter_coefficients
from ..models.config import BrokerMode, QIMispecification, RunConfig, SignalSource
from ..models.params import ModelParams, TimeGrid
from ..models.report import ExperimentReport, ReportMetadata
from ..utils.exceptions import FilterDegeneracyError
from ..utils.logger import get_logger
from .noise import draw_batch_noise
from .simulator import MarketSimulator

logger = get_logger("brokersim.sim.experiment")

OPTIMAL_ARM = BrokerMode.OPTIMAL.value


@dataclass(frozen=True)
class SolvedModel:
    """エージェントのモデルから解いた係数一式"""

    params: ModelParams
    trader: TraderCoefficients
    broker: BrokerCoefficients
    flow: FlowFilterCoefficients | None


def solve_model(
    model_params: ModelParams,
    grid: TimeGrid,
    admissibility: str = "error",
    c_belief: float | None = None,
) -> SolvedModel:
    """
    トレーダー・ブローカー・フローフィルタの係数を解く

    フローフィルタが退化する場合（p = 0 かつ σ_α = 0 など）は flow を None にする。
    """
    trader = compute_trader_coefficients(model_params, grid, admissibility)
    broker = compute_broker_coefficients(model_params, trader, grid, c_belief)
    try:
        flow = flow_filter_coefficients(trader, model_params, grid)
    except FilterDegeneracyError as e:
        logger.warning(f"フローフィルタ係数を計算できません: {e}")
        flow = None
    return SolvedModel(params=model_params, trader=trader, broker=broker, flow=flow)


@dataclass
class ExperimentResult:
    """実験レポートとパスごとの生の指標"""

    report: ExperimentReport
    metrics: dict[str, np.ndarray] = field(default_factory=dict)


def _arms(benchmarks: list[int]) -> list[str]:
    return [OPTIMAL_ARM, *(f"benchmark{i}" for i in benchmarks)]


def _default_workers(threads: int | None, n_batches: int) -> int:
    if threads is not None:
        return max(1, min(threads, n_batches))
    return max(1, min(n_batches, os.cpu_count() or 1))


def _run_batch(
    simulator: MarketSimulator,
    config: RunConfig,
    path_indices: list[int],
    base_seed: int,
) -> dict[str, np.ndarray]:
    strategy = config.strategy
    mispecified = QIMispecification(strategy.mispecify_qi) is QIMispecification.NORMAL
    noise, qI0 = draw_batch_noise(base_seed, path_indices, simulator.grid.steps, mispecified)

    metrics: dict[str, np.ndarray] = {}
    results = {}
    for arm in _arms(config.experiment.benchmarks):
        arm_config = strategy.model_copy(update={"broker_mode": arm, "seed": base_seed})
        batch = simulator.run(arm_config, path_indices, noise, qI0)
        results[arm] = batch
        metrics[f"wealth_{arm}"] = batch.terminal_wealth
        metrics[f"blowup_{arm}"] = batch.blown_up

    optimal = results[OPTIMAL_ARM]
    for i in config.experiment.benchmarks:
        metrics[f"out_{i}"] = outperformance_batch(optimal, results[f"benchmark{i}"])

    if simulator.flow is not None:
        metrics["naive_flow_gap"] = estimator_gap(optimal)
        metrics["mse_price"] = mean_squared_error(optimal, "price")
        metrics["mse_flow"] = mean_squared_error(optimal, "flow")

    if config.experiment.compare_estimators and simulator.flow is not None:
        by_source = {}
        for source in (SignalSource.PRICE, SignalSource.FLOW):
            if SignalSource(strategy.signal_source) is source:
                by_source[source] = optimal
                continue
            source_config = strategy.model_copy(
                update={"broker_mode": OPTIMAL_ARM, "signal_source": source.value, "seed": base_seed}
            )
            by_source[source] = simulator.run(source_config, path_indices, noise, qI0)
        metrics["flow_vs_price"] = outperformance_batch(
            by_source[SignalSource.FLOW], by_source[SignalSource.PRICE]
        )
    return metrics


def run_experiment(
    params: ModelParams,
    config: RunConfig,
    n_paths: int | None = None,
    base_seed: int | None = None,
    model: SolvedModel | None = None,
    model_params: ModelParams | None = None,
) -> ExperimentResult:
    """
    モンテカルロ実験を実行する

    Args:
        params: 真の市場パラメータ
        config: 実行設定（戦略・ベンチマーク・バッチサイズ・スレッド数）
        n_paths: パス数（省略時は config.experiment.paths）
        base_seed: ベースシード（省略時は config.strategy.seed）
        model: 解済みのエージェント係数（省略時は model_params から解く）
        model_params: エージェントが想定するパラメータ（省略時は params）

    Returns:
        ExperimentResult
    """
    settings = config.experiment
    n_paths = settings.paths if n_paths is None else n_paths
    base_seed = config.strategy.seed if base_seed is None else base_seed
    if model is None:
        model = solve_model(model_params or params, config.grid, config.solver.admissibility)
    if (
        BrokerMode(config.strategy.broker_mode) is BrokerMode.OPTIMAL
        and SignalSource(config.strategy.signal_source) is SignalSource.FLOW
        and model.flow is None
    ):
        raise FilterDegeneracyError("flow signal source requested but flow filter is degenerate")

    simulator = MarketSimulator(params, model.trader, model.broker, model.flow)
    batches = [
        list(range(start, min(start + settings.batch_size, n_paths)))
        for start in range(0, n_paths, settings.batch_size)
    ]
    max_workers = _default_workers(settings.threads, len(batches))
    logger.info(
        f"実験を開始します: {n_paths} パス, {len(batches)} バッチ, {max_workers} ワーカー "
        f"(signal={config.strategy.signal_source}, seed={base_seed})"
    )

    collected: dict[int, dict[str, np.ndarray]] = {}
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = {
            executor.submit(_run_batch, simulator, config, indices, base_seed): number
            for number, indices in enumerate(batches)
        }
        for future in as_completed(futures):
            number = futures[future]
            collected[number] = future.result()
            logger.info(f"バッチ {number + 1}/{len(batches)} 完了")

    metrics = {
        name: np.concatenate([collected[number][name] for number in range(len(batches))])
        for name in collected[0]
    }
    report = build_report(params, model.params, config, metrics, n_paths, base_seed, model)
    return ExperimentResult(report=report, metrics=metrics)


def build_report(
    params: ModelParams,
    model_params: ModelParams,
    config: RunConfig,
    metrics: dict[str, np.ndarray],
    n_paths: int,
    base_seed: int,
    model: SolvedModel | None = None,
) -> ExperimentReport:
    """パスごとの指標から ExperimentReport を組み立てる"""
    settings = config.experiment
    outperformance = [
        summarize_outperformance(i, metrics[f"out_{i}"], settings.significance_level)
        for i in settings.benchmarks
    ]
    raw = [
        summarize_arm(arm, metrics[f"wealth_{arm}"], metrics[f"blowup_{arm}"])
        for arm in _arms(settings.benchmarks)
    ]

    base = params.model_dump()
    overrides = {
        name: value
        for name, value in model_params.model_dump().items()
        if value != base[name]
    }
    extras: dict[str, Any] = {}
    if "naive_flow_gap" in metrics:
        gap = metrics["naive_flow_gap"]
        gap = gap[np.isfinite(gap)]
        extras["naive_flow_gap_median"] = float(np.median(gap)) if gap.size else None
        extras["flow_beats_price_fraction"] = float(
            np.mean(metrics["mse_flow"] < metrics["mse_price"])
        )
    if "flow_vs_price" in metrics:
        extras["flow_vs_price"] = one_sided_t_test(metrics["flow_vs_price"]).model_dump()
    if model is not None:
        extras["existence_flagged_points"] = model.broker.eigen_diag.flagged_count
        extras["reduction_gap"] = model.broker.reduction_gap

    metadata = ReportMetadata(
        params_hash=params.params_hash(),
        model_params_hash=model_params.params_hash(),
        base_seed=base_seed,
        n_paths=n_paths,
        steps=config.grid.steps,
        horizon=config.grid.horizon,
        signal_source=SignalSource(config.strategy.signal_source).value,
        mispecify_qi=QIMispecification(config.strategy.mispecify_qi).value,
        c_belief=model_params.c_belief,
        overrides=overrides,
    )
    for row in outperformance:
        logger.info(
            f"Out({row.benchmark}) = {row.mean:.4g} ({row.std:.4g}), "
            f"p = {row.p_value:.3g}, n = {row.n_effective}, excluded = {row.n_excluded}"
        )
    return ExperimentReport(
        outperformance=outperformance, raw_performance=raw, metadata=metadata, extras=extras
    )
