"""
ブローカーの係数システム

価格フィルタ分散 V^B、P行列、4x4行列Riccati G2（縮約2x2系による検証付き）、
定数項 G0、存在条件の固有値診断、フィードバック制御を扱う。
状態の並びは ỹ = (q^B, α̂, ξ, q^I)。
"""

from dataclasses import dataclass

import numpy as np

from ..models.params import ModelParams, TimeGrid
from ..numerics import DeterministicTable, Direction, rk4_integrate, solve_scalar_riccati
from ..utils.exceptions import (
    AdmissibilityError,
    ErrorMessages,
    ExistenceViolationError,
    IntegrationBlowupError,
)
from ..utils.logger import get_logger
from .trader import TraderCoefficients

logger = get_logger("brokersim.coefficients.broker")

# 縮約2x2系が対応する G2 の行・列（q^B と q^I）
REDUCED_INDEX = (0, 3)
REDUCTION_TOLERANCE = 1e-8
EIGEN_NEGATIVE_TOL = 1e-6
EIGEN_ZERO_TOL = 1e-8


@dataclass(frozen=True)
class PMatrices:
    """ある時刻での P2, P5, P7, P8, P9 と正規化定数 s = sqrt(a - (c f2)^2 b)"""

    P2: np.ndarray
    P5: np.ndarray
    P7: np.ndarray
    P8: np.ndarray
    P9: np.ndarray
    s: float


@dataclass(frozen=True)
class EigenDiagnostic:
    """L(t) + L(t)^T の固有値診断"""

    eigenvalues: DeterministicTable
    determinants: np.ndarray
    flagged: np.ndarray

    @property
    def flagged_count(self) -> int:
        """条件を満たさないグリッド点の数"""
        return int(np.count_nonzero(self.flagged))


@dataclass(frozen=True)
class BrokerCoefficients:
    """ブローカー側の解かれた係数テーブル一式"""

    params: ModelParams
    grid: TimeGrid
    trader: TraderCoefficients
    vB: DeterministicTable
    G2: DeterministicTable
    G0: DeterministicTable
    c_belief: float
    eigen_diag: EigenDiagnostic
    feedback: DeterministicTable
    reduced: DeterministicTable
    reduction_gap: float

    def tables(self) -> list[DeterministicTable]:
        """CSV出力用のテーブル（G2は上三角の10成分）"""
        upper = [
            DeterministicTable(f"G2_{i + 1}{j + 1}", self.grid, self.G2.values[:, i, j])
            for i in range(4)
            for j in range(i, 4)
        ]
        eigen = DeterministicTable("lambda", self.grid, self.eigen_diag.eigenvalues.values)
        return [*upper, self.G0, self.vB, eigen]


@dataclass(frozen=True)
class BrokerRate:
    """ブローカーの取引速度と状態座標ごとの寄与"""

    total: float | np.ndarray
    components: tuple[float | np.ndarray, ...]


def compute_vB_price(params: ModelParams, grid: TimeGrid) -> DeterministicTable:
    """
    価格観測に基づくブローカーのフィルタ分散 V^B を前進Riccatiで解く（V^B_0 = 0）

    Args:
        params: モデルパラメータ
        grid: 時間グリッド

    Returns:
        V^B のテーブル
    """
    sigma_s = params.sigma_s
    sigma_a = params.sigma_alpha
    return solve_scalar_riccati(
        q=-1.0 / sigma_s**2,
        l=2.0 * (-params.kappa_alpha - params.rho * sigma_a / sigma_s),
        c=(1.0 - params.rho**2) * sigma_a**2,
        boundary=0.0,
        grid=grid,
        direction=Direction.FORWARD,
        name="vB",
    )


def _normaliser(params: ModelParams, f2: float, t: float) -> float:
    gap = params.broker_cost - f2**2 * params.trader_cost
    if not gap > 0.0:
        raise AdmissibilityError(
            ErrorMessages.ADMISSIBILITY.format(condition="a - f2^2 b > 0", t=t), t=t
        )
    return float(np.sqrt(gap))


def _p_matrices(
    params: ModelParams, f1: float, f2: float, f3: float, vb: float, t: float
) -> PMatrices:
    b = params.trader_cost
    s = _normaliser(params, f2, t)
    kappa = params.kappa_alpha

    P2 = np.array(
        [
            [0.0, 0.0, 0.0, 0.0],
            [-f1, -kappa, 0.0, f1],
            [-1.0, 0.0, -params.kappa_u, 0.0],
            [-f3, 0.0, 0.0, f3],
        ]
    )
    P5 = np.array(
        [
            [-(params.rho0_b + params.rho1_b * vb), 0.5, 0.0, 0.0],
            [0.5, f1**2 * b, 0.0, f1 * f3 * b],
            [0.0, 0.0, params.flow_cost, 0.0],
            [0.0, f1 * f3 * b, 0.0, f3**2 * b],
        ]
    )
    P7 = np.array([params.permanent_impact / (2.0 * s), f1 * f2 * b / s, 0.0, f2 * f3 * b / s])
    P8 = np.array([(1.0 - f2) / (2.0 * s), 0.0, 0.0, f2 / (2.0 * s)])
    P9 = 2.0 * np.outer(P8, P7) + P2.T
    return PMatrices(P2=P2, P5=P5, P7=P7, P8=P8, P9=P9, s=s)


def build_P_matrices(
    t: float,
    coeffs: TraderCoefficients,
    vB: DeterministicTable,
    params: ModelParams,
    c_belief: float | None = None,
) -> PMatrices:
    """
    時刻 t での P 行列を組み立てる

    二次的信念が有効な場合、f2 はすべて c_belief * f2 に置き換える。

    Args:
        t: 時刻
        coeffs: トレーダー係数
        vB: ブローカーのフィルタ分散
        params: モデルパラメータ
        c_belief: 二次的信念（Noneの場合は params.c_belief）

    Returns:
        PMatrices

    Raises:
        AdmissibilityError: a - (c f2)^2 b <= 0 の場合
    """
    belief = params.c_belief if c_belief is None else c_belief
    return _p_matrices(
        params,
        float(coeffs.f1(t)),
        belief * float(coeffs.f2(t)),
        float(coeffs.f3(t)),
        float(vB(t)),
        t,
    )


def reduced_system(
    t: float,
    coeffs: TraderCoefficients,
    vB: DeterministicTable,
    params: ModelParams,
    c_belief: float | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    (q^B, q^I) ブロックの縮約系の行列 U, V, B を返す

    Returns:
        (U, V, B) のタプル
    """
    belief = params.c_belief if c_belief is None else c_belief
    a = params.broker_cost
    b = params.trader_cost
    p = params.permanent_impact
    f2 = belief * float(coeffs.f2(t))
    f3 = float(coeffs.f3(t))
    s2 = _normaliser(params, f2, t) ** 2
    risk = params.rho0_b + params.rho1_b * float(vB(t))

    weights = np.array([1.0 - f2, f2])
    U = np.outer(weights, weights) / s2
    V = np.array(
        [
            [p * (1.0 - f2) / 2.0, -f3 * (a - f2 * b)],
            [p * f2 / 2.0, a * f3],
        ]
    ) / s2
    B = np.array(
        [
            [p**2 / 4.0 - s2 * risk, p * f2 * f3 * b / 2.0],
            [p * f2 * f3 * b / 2.0, f3**2 * a * b],
        ]
    ) / s2
    return U, V, B


def _symmetrise(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def _integrate_or_fail(rhs, terminal: np.ndarray, grid: TimeGrid, name: str) -> DeterministicTable:
    try:
        return rk4_integrate(
            rhs, terminal, grid, Direction.BACKWARD, name=name, step_hook=_symmetrise
        )
    except IntegrationBlowupError as e:
        t = e.t
        raise ExistenceViolationError(
            ErrorMessages.EXISTENCE_VIOLATION.format(t=t),
            t=t,
            details="permanent impact p may be outside the admissible range",
        ) from e


def existence_diagnostic(
    params: ModelParams,
    coeffs: TraderCoefficients,
    vB: DeterministicTable,
    grid: TimeGrid,
    c_belief: float | None = None,
) -> EigenDiagnostic:
    """
    L(t) + L(t)^T の固有値を各グリッド点で計算する

    固有値は絶対値の降順に並べるため、構造的にゼロとなる固有値は4番目に来る。
    上位3つが厳密に負でない点、または4番目の絶対値が 1e-8 を超える点にフラグを立てる。

    Args:
        params: モデルパラメータ
        coeffs: トレーダー係数
        vB: ブローカーのフィルタ分散
        grid: 時間グリッド
        c_belief: 二次的信念

    Returns:
        EigenDiagnostic
    """
    C = np.diag([0.0, 1.0])
    eigenvalues = np.empty((len(grid), 4))
    determinants = np.empty(len(grid))

    for k, t in enumerate(grid.times):
        U, V, B = reduced_system(float(t), coeffs, vB, params, c_belief)
        L = np.block([[C @ V + B.T, C @ U], [np.zeros((2, 2)), -U.T]])
        M = L + L.T
        values = np.linalg.eigvalsh(M)
        eigenvalues[k] = values[np.argsort(-np.abs(values), kind="stable")]

        scale = np.max(np.abs(M), axis=1)
        scale[scale == 0.0] = 1.0
        determinants[k] = np.linalg.det(M / scale[:, None])

    leading = eigenvalues[:, :3]
    flagged = np.any(leading >= -EIGEN_NEGATIVE_TOL, axis=1) | (
        np.abs(eigenvalues[:, 3]) > EIGEN_ZERO_TOL
    )
    if np.any(flagged):
        logger.warning(f"存在条件の診断で {int(np.count_nonzero(flagged))} 点にフラグが立ちました")
    return EigenDiagnostic(
        eigenvalues=DeterministicTable("lambda", grid, eigenvalues),
        determinants=determinants,
        flagged=flagged,
    )


def solve_broker_riccati(
    params: ModelParams,
    coeffs: TraderCoefficients,
    vB: DeterministicTable,
    grid: TimeGrid,
    c_belief: float | None = None,
) -> BrokerCoefficients:
    """
    ブローカーの行列Riccati方程式を解く

    4x4系を直接後退積分し、(q^B, q^I) ブロックは縮約2x2系の独立な積分で
    置き換える（両者の差は reduction_gap に記録）。続いて G0 を後退積分し、
    固有値診断とフィードバック係数を計算する。

    Args:
        params: モデルパラメータ
        coeffs: トレーダー係数
        vB: ブローカーのフィルタ分散
        grid: 時間グリッド
        c_belief: 二次的信念（Noneの場合は params.c_belief）

    Returns:
        BrokerCoefficients

    Raises:
        ExistenceViolationError: Riccati方程式が発散した場合
        AdmissibilityError: a - (c f2)^2 b <= 0 の場合
    """
    belief = params.c_belief if c_belief is None else c_belief
    terminal = np.zeros((4, 4))
    terminal[0, 0] = -(params.beta0_b + params.beta1_b * float(vB.terminal))

    def full_rhs(t: float, G: np.ndarray) -> np.ndarray:
        P = build_P_matrices(t, coeffs, vB, params, belief)
        quadratic = 4.0 * G.T @ np.outer(P.P8, P.P8) @ G
        return -(np.outer(P.P7, P.P7) + quadratic + G.T @ P.P9 + P.P9.T @ G + P.P5)

    def reduced_rhs(t: float, G: np.ndarray) -> np.ndarray:
        U, V, B = reduced_system(t, coeffs, vB, params, belief)
        return -(G @ U @ G + G @ V + V.T @ G + B)

    full = _integrate_or_fail(full_rhs, terminal, grid, "G2")
    idx = np.ix_(REDUCED_INDEX, REDUCED_INDEX)
    reduced = _integrate_or_fail(reduced_rhs, terminal[idx], grid, "G2_reduced")

    G2_values = np.array(full.values)
    block = G2_values[:, REDUCED_INDEX][:, :, REDUCED_INDEX]
    reduction_gap = float(np.max(np.abs(block - reduced.values)))
    if reduction_gap > REDUCTION_TOLERANCE:
        logger.warning(f"縮約系と4x4系の差が許容値を超えています: {reduction_gap:.3e}")
    for row, i in enumerate(REDUCED_INDEX):
        for col, j in enumerate(REDUCED_INDEX):
            G2_values[:, i, j] = reduced.values[:, row, col]
    G2 = DeterministicTable("G2", grid, G2_values)

    innovation_vol = vB.map(
        "alpha_hat_vol",
        lambda v: (v + params.rho * params.sigma_s * params.sigma_alpha) / params.sigma_s,
    )

    def constant_rhs(t: float, _y: np.ndarray) -> float:
        G = G2(t)
        return -(float(innovation_vol(t)) ** 2 * G[1, 1] + params.sigma_u**2 * G[2, 2])

    G0 = rk4_integrate(constant_rhs, 0.0, grid, Direction.BACKWARD, name="G0")

    gains = np.empty((len(grid), 4))
    for k, t in enumerate(grid.times):
        P = build_P_matrices(float(t), coeffs, vB, params, belief)
        gains[k] = (P.P7 + 2.0 * P.P8 @ G2_values[k]) / P.s

    diagnostic = existence_diagnostic(params, coeffs, vB, grid, belief)
    logger.info(
        f"ブローカー係数を解きました (N={grid.steps}, c_belief={belief}, "
        f"G2_11(0)={G2_values[0, 0, 0]:.6g}, reduction_gap={reduction_gap:.3e})"
    )
    return BrokerCoefficients(
        params=params,
        grid=grid,
        trader=coeffs,
        vB=vB,
        G2=G2,
        G0=G0,
        c_belief=belief,
        eigen_diag=diagnostic,
        feedback=DeterministicTable("feedback", grid, gains),
        reduced=DeterministicTable("G2_reduced", grid, reduced.values),
        reduction_gap=reduction_gap,
    )


def compute_broker_coefficients(
    params: ModelParams,
    trader: TraderCoefficients,
    grid: TimeGrid,
    c_belief: float | None = None,
) -> BrokerCoefficients:
    """V^B を解いてから solve_broker_riccati を呼ぶ"""
    vB = compute_vB_price(params, grid)
    return solve_broker_riccati(params, trader, vB, grid, c_belief)


def broker_control(
    t: float, y_tilde: np.ndarray | tuple[float, ...], coeffs: BrokerCoefficients
) -> BrokerRate:
    """
    ブローカーの最適取引速度 ν* = (P7 + 2 P8 G2) ỹ^T / s

    Args:
        t: 時刻
        y_tilde: 状態 (q^B, α̂, ξ, q^I)。先頭軸が座標（パス方向にベクトル化可）
        coeffs: ブローカー係数

    Returns:
        合計と4つの座標ごとの寄与
    """
    gains = np.asarray(coeffs.feedback(t))
    state = np.asarray(y_tilde, dtype=float)
    components = tuple(gains[i] * state[i] for i in range(4))
    total = components[0] + components[1] + components[2] + components[3]
    if np.ndim(total) == 0:
        return BrokerRate(total=float(total), components=tuple(float(c) for c in components))
    return BrokerRate(total=total, components=components)


def broker_value(
    t: float, x: float, s: float, y_tilde: np.ndarray, coeffs: BrokerCoefficients
) -> float:
    """ブローカーの価値関数 x + q^B s + ỹ G2 ỹ^T + G0"""
    state = np.asarray(y_tilde, dtype=float)
    return float(x + state[0] * s + state @ coeffs.G2(t) @ state + coeffs.G0(t))
