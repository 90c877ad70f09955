"""
固定ステップの古典的4次Runge-Kutta積分

係数ODEはすべてモンテカルロと同じ等間隔グリッド上で解く。
後退方向では t_N の終端値から t_0 に向かって積分する。
"""

from collections.abc import Callable
from enum import Enum

import numpy as np

from ..models.params import TimeGrid
from ..utils.exceptions import ErrorMessages, IntegrationBlowupError
from ..utils.logger import get_logger
from .table import DeterministicTable

logger = get_logger("brokersim.numerics")

VectorField = Callable[[float, np.ndarray], np.ndarray]
StepHook = Callable[[np.ndarray], np.ndarray]
Coefficient = DeterministicTable | float


class Direction(str, Enum):
    """積分の方向"""

    FORWARD = "forward"
    BACKWARD = "backward"


def rk4_integrate(
    rhs: VectorField,
    boundary_value: np.ndarray | float,
    grid: TimeGrid,
    direction: Direction | str = Direction.FORWARD,
    name: str = "y",
    step_hook: StepHook | None = None,
) -> DeterministicTable:
    """
    y' = rhs(t, y) をRK4で積分する

    Args:
        rhs: 時間依存のベクトル場（スカラー・ベクトル・行列のいずれの形状も可）
        boundary_value: 前進なら y(0)、後退なら y(T)
        grid: 時間グリッド
        direction: 'forward' または 'backward'
        name: 結果テーブルの名前
        step_hook: 各ステップ後に状態へ適用する関数（行列の対称化など）

    Returns:
        各グリッド点の解を保持するテーブル

    Raises:
        IntegrationBlowupError: 非有限値が生じた場合（発生時刻をcontextに保持）
    """
    direction = Direction(direction)
    times = grid.times
    start = np.array(boundary_value, dtype=float)
    if not np.all(np.isfinite(start)):
        raise IntegrationBlowupError(
            ErrorMessages.INTEGRATION_BLOWUP.format(t="boundary"), details=name
        )

    values = np.empty((len(grid), *start.shape))
    if direction is Direction.FORWARD:
        values[0] = start
        order = range(grid.steps)
        step = 1
    else:
        values[-1] = start
        order = range(grid.steps, 0, -1)
        step = -1

    for k in order:
        t0 = times[k]
        t1 = times[k + step]
        h = t1 - t0
        tm = 0.5 * (t0 + t1)
        y = values[k]

        k1 = rhs(t0, y)
        k2 = rhs(tm, y + 0.5 * h * k1)
        k3 = rhs(tm, y + 0.5 * h * k2)
        k4 = rhs(t1, y + h * k3)
        y_next = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step_hook is not None:
            y_next = step_hook(y_next)

        if not np.all(np.isfinite(y_next)):
            logger.warning(f"{name}: 非有限値を検出しました (t={t1:.6g})")
            raise IntegrationBlowupError(
                ErrorMessages.INTEGRATION_BLOWUP.format(t=f"{t1:.6g}"), t=float(t1), details=name
            )
        values[k + step] = y_next

    return DeterministicTable(name, grid, values)


def _evaluate(coefficient: Coefficient, t: float) -> float:
    if isinstance(coefficient, DeterministicTable):
        return float(coefficient(t))
    return float(coefficient)


def solve_scalar_riccati(
    q: Coefficient,
    l: Coefficient,  # noqa: E741
    c: Coefficient,
    boundary: float,
    grid: TimeGrid,
    direction: Direction | str = Direction.FORWARD,
    name: str = "riccati",
) -> DeterministicTable:
    """
    スカラーRiccati方程式を解く

    前進: y' = c(t) + l(t) y + q(t) y^2
    後退: 0 = y' + c(t) + l(t) y + q(t) y^2

    Args:
        q: 二次項の係数
        l: 一次項の係数
        c: 定数項
        boundary: 前進なら y(0)、後退なら y(T)
        grid: 時間グリッド
        direction: 積分の方向
        name: 結果テーブルの名前

    Returns:
        解のテーブル

    Raises:
        IntegrationBlowupError: 解が発散した場合
    """
    direction = Direction(direction)
    sign = 1.0 if direction is Direction.FORWARD else -1.0

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return sign * (_evaluate(c, t) + _evaluate(l, t) * y + _evaluate(q, t) * y * y)

    return rk4_integrate(rhs, float(boundary), grid, direction, name=name)
