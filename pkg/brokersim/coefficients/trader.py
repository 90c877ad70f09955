"""
情報トレーダーの係数システム

分散 V^I、二次係数 g2、線形項 z1..z8 と、そこから導かれる
f1 = z1/(2b)、f2 = z2/(2b)、f3 = g2/b を解く。
"""

from dataclasses import dataclass

import numpy as np

from ..models.params import ModelParams, TimeGrid
from ..numerics import DeterministicTable, Direction, rk4_integrate, solve_scalar_riccati
from ..utils.exceptions import AdmissibilityError, ErrorMessages, ModelInconsistencyError
from ..utils.logger import get_logger

logger = get_logger("brokersim.coefficients.trader")


@dataclass(frozen=True)
class TraderCoefficients:
    """トレーダー側の解かれた係数テーブル一式"""

    params: ModelParams
    grid: TimeGrid
    vI: DeterministicTable
    g2: DeterministicTable
    z: tuple[DeterministicTable, ...]
    f1: DeterministicTable
    f2: DeterministicTable
    f3: DeterministicTable
    admissible: bool = True

    def z_table(self, index: int) -> DeterministicTable:
        """z_index (1始まり) を返す"""
        return self.z[index - 1]

    def tables(self) -> list[DeterministicTable]:
        """CSV出力順のテーブル (vI, g2, z1..z8, f1, f2, f3)"""
        return [self.vI, self.g2, *self.z, self.f1, self.f2, self.f3]


def compute_vI(params: ModelParams, grid: TimeGrid) -> DeterministicTable:
    """
    トレーダーのフィルタ分散 V^I を前進Riccatiで解く（V^I_0 = 0）

    Args:
        params: モデルパラメータ
        grid: 時間グリッド

    Returns:
        V^I のテーブル
    """
    return solve_scalar_riccati(
        q=-(params.permanent_impact**2) / params.sigma_s**2,
        l=-2.0 * params.theta_b,
        c=params.sigma_b**2,
        boundary=0.0,
        grid=grid,
        direction=Direction.FORWARD,
        name="vI",
    )


def compute_g2(params: ModelParams, vI: DeterministicTable, grid: TimeGrid) -> DeterministicTable:
    """
    在庫の二次係数 g2 を後退Riccatiで解く

    Args:
        params: モデルパラメータ
        vI: 同じグリッド上の V^I
        grid: 時間グリッド

    Returns:
        g2 のテーブル（全点で負）

    Raises:
        ModelInconsistencyError: g2 が負でない点がある場合
    """
    running = vI.map("g2_source", lambda v: -(params.rho0_i + params.rho1_i * v))
    terminal = -(params.beta0_i + params.beta1_i * float(vI.terminal))
    g2 = solve_scalar_riccati(
        q=1.0 / params.trader_cost,
        l=0.0,
        c=running,
        boundary=terminal,
        grid=grid,
        direction=Direction.BACKWARD,
        name="g2",
    )

    bad = np.flatnonzero(g2.values >= 0.0)
    if bad.size:
        t = float(grid.times[bad[0]])
        raise ModelInconsistencyError(ErrorMessages.NEGATIVE_G2.format(t=t), t=t)
    return g2


def compute_z(
    params: ModelParams, g2: DeterministicTable, vI: DeterministicTable, grid: TimeGrid
) -> tuple[DeterministicTable, ...]:
    """
    z1..z8 を (z1, z2) → (z6, z7, z8) → (z4, z5) → z3 の順に後退積分する

    すべて終端条件 z_i(T) = 0。

    Args:
        params: モデルパラメータ
        g2: 在庫の二次係数
        vI: トレーダーのフィルタ分散
        grid: 時間グリッド

    Returns:
        (z1, ..., z8) のタプル

    Raises:
        ModelInconsistencyError: z1 または z2 が負になった場合
    """
    b = params.trader_cost
    kappa = params.kappa_alpha
    theta = params.theta_b
    p = params.permanent_impact

    def half_g2(t: float) -> float:
        return float(g2(t)) / (2.0 * b)

    def linear_rhs(t: float, y: np.ndarray) -> np.ndarray:
        h = half_g2(t)
        return np.array([-1.0 + (kappa - h) * y[0], -p + (theta - h) * y[1]])

    z12 = rk4_integrate(linear_rhs, np.zeros(2), grid, Direction.BACKWARD, name="z12")
    z1 = DeterministicTable("z1", grid, z12.values[:, 0])
    z2 = DeterministicTable("z2", grid, z12.values[:, 1])

    for table in (z1, z2):
        bad = np.flatnonzero(table.values < 0.0)
        if bad.size:
            t = float(grid.times[bad[0]])
            raise ModelInconsistencyError(
                ErrorMessages.NEGATIVE_Z.format(name=table.name, t=t), t=t
            )

    def quadratic_rhs(t: float, y: np.ndarray) -> np.ndarray:
        a1 = float(z1(t))
        a2 = float(z2(t))
        return np.array(
            [
                -a1 * a2 / (2.0 * b) + (kappa + theta) * y[0],
                -(a1**2) / (4.0 * b) + 2.0 * kappa * y[1],
                -(a2**2) / (4.0 * b) + 2.0 * theta * y[2],
            ]
        )

    z678 = rk4_integrate(quadratic_rhs, np.zeros(3), grid, Direction.BACKWARD, name="z678")

    def cross_rhs(t: float, y: np.ndarray) -> np.ndarray:
        h = half_g2(t)
        return np.array(
            [
                -h * float(z1(t)) + kappa * y[0],
                -h * float(z2(t)) + theta * y[1],
            ]
        )

    z45 = rk4_integrate(cross_rhs, np.zeros(2), grid, Direction.BACKWARD, name="z45")

    z6 = DeterministicTable("z6", grid, z678.values[:, 0])
    z7 = DeterministicTable("z7", grid, z678.values[:, 1])
    z8 = DeterministicTable("z8", grid, z678.values[:, 2])
    sigma_s = params.sigma_s
    sigma_a = params.sigma_alpha

    def constant_rhs(t: float, _y: np.ndarray) -> float:
        v = float(vI(t))
        return -(
            p * sigma_a * params.rho * v / sigma_s * float(z6(t))
            + sigma_a**2 * float(z7(t))
            + (p * v / sigma_s) ** 2 * float(z8(t))
        )

    z3 = rk4_integrate(constant_rhs, 0.0, grid, Direction.BACKWARD, name="z3")
    z4 = DeterministicTable("z4", grid, z45.values[:, 0])
    z5 = DeterministicTable("z5", grid, z45.values[:, 1])
    return (z1, z2, z3, z4, z5, z6, z7, z8)


def compute_trader_coefficients(
    params: ModelParams, grid: TimeGrid, admissibility: str = "error"
) -> TraderCoefficients:
    """
    トレーダーの係数システム全体を解く

    Args:
        params: モデルパラメータ
        grid: 時間グリッド
        admissibility: 1 + b f3 > 0 違反時の扱い ('error' または 'warn')

    Returns:
        TraderCoefficients

    Raises:
        AdmissibilityError: admissibility='error' で条件が破れた場合
    """
    vI = compute_vI(params, grid)
    g2 = compute_g2(params, vI, grid)
    z = compute_z(params, g2, vI, grid)

    b = params.trader_cost
    f1 = z[0].map("f1", lambda v: v / (2.0 * b))
    f2 = z[1].map("f2", lambda v: v / (2.0 * b))
    f3 = g2.map("f3", lambda v: v / b)

    margin = 1.0 + b * f3.values
    admissible = bool(np.all(margin > 0.0))
    if not admissible:
        t = float(grid.times[np.flatnonzero(margin <= 0.0)[0]])
        message = ErrorMessages.ADMISSIBILITY.format(condition="1 + b f3 > 0", t=t)
        if admissibility == "error":
            raise AdmissibilityError(message, t=t)
        logger.warning(message)

    logger.info(
        f"トレーダー係数を解きました (N={grid.steps}, vI_T={float(vI.terminal):.6g}, "
        f"g2(0)={float(g2.initial):.6g}, f1(0)={float(f1.initial):.6g})"
    )
    return TraderCoefficients(
        params=params,
        grid=grid,
        vI=vI,
        g2=g2,
        z=z,
        f1=f1,
        f2=f2,
        f3=f3,
        admissible=admissible,
    )


def trader_control(
    t: float,
    alpha: float | np.ndarray,
    nu_hat: float | np.ndarray,
    qI: float | np.ndarray,
    coeffs: TraderCoefficients,
) -> float | np.ndarray:
    """
    トレーダーの最適取引速度 η* = (z1 α + z2 ν̂ + 2 g2 q)/(2b)

    Args:
        t: 時刻
        alpha: シグナル
        nu_hat: ブローカー速度の推定値
        qI: トレーダーの在庫
        coeffs: 解かれた係数

    Returns:
        取引速度
    """
    signal, flow, inventory = trader_control_components(t, alpha, nu_hat, qI, coeffs)
    return signal + flow + inventory


def trader_control_components(
    t: float,
    alpha: float | np.ndarray,
    nu_hat: float | np.ndarray,
    qI: float | np.ndarray,
    coeffs: TraderCoefficients,
) -> tuple[float | np.ndarray, float | np.ndarray, float | np.ndarray]:
    """η* を (α項, ν̂項, 在庫項) に分解"""
    two_b = 2.0 * coeffs.params.trader_cost
    z1 = coeffs.z[0](t)
    z2 = coeffs.z[1](t)
    g2 = coeffs.g2(t)
    return z1 * alpha / two_b, z2 * nu_hat / two_b, 2.0 * g2 * qI / two_b


def trader_value(
    t: float,
    x: float,
    s: float,
    alpha: float,
    nu_hat: float,
    q: float,
    coeffs: TraderCoefficients,
) -> float:
    """
    トレーダーの価値関数 x + q s + g0 + q g1 + q^2 g2

    g1 = z1 α + z2 ν̂、g0 = z3 + z4 α + z5 ν̂ + z6 α ν̂ + z7 α^2 + z8 ν̂^2。
    """
    z = [float(table(t)) for table in coeffs.z]
    g1 = z[0] * alpha + z[1] * nu_hat
    g0 = (
        z[2]
        + z[3] * alpha
        + z[4] * nu_hat
        + z[5] * alpha * nu_hat
        + z[6] * alpha**2
        + z[7] * nu_hat**2
    )
    return x + q * s + g0 + q * g1 + q**2 * float(coeffs.g2(t))
