"""
時間グリッド上の決定論的係数テーブル
"""

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..models.params import TimeGrid
from ..utils.exceptions import TableRangeError
from ..utils.file_utils import write_csv

# グリッド点とみなす相対許容誤差
_SNAP_TOL = 1e-9


@dataclass(frozen=True)
class DeterministicTable:
    """
    グリッド点ごとに値（スカラーまたは小さな密行列）を保持する係数関数

    Attributes:
        name: テーブル名（CSV列名に使用）
        grid: 時間グリッド
        values: 形状 (N+1, *value_shape) の配列（読み取り専用）
    """

    name: str
    grid: TimeGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim == 0 or values.shape[0] != len(self.grid):
            raise ValueError(
                f"table {self.name!r} needs one value per grid point "
                f"({len(self.grid)}), got shape {values.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def value_shape(self) -> tuple[int, ...]:
        """1点あたりの値の形状"""
        return tuple(self.values.shape[1:])

    @property
    def terminal(self) -> np.ndarray | float:
        """t=T の値"""
        return self._unwrap(self.values[-1])

    @property
    def initial(self) -> np.ndarray | float:
        """t=0 の値"""
        return self._unwrap(self.values[0])

    @property
    def last_interior(self) -> np.ndarray | float:
        """t=T-dt の値"""
        return self._unwrap(self.values[-2])

    def at(self, k: int) -> np.ndarray | float:
        """グリッド点 k の値"""
        return self._unwrap(self.values[k])

    def __call__(self, t: float) -> np.ndarray | float:
        """
        時刻 t での値（グリッド点間は線形補間）

        Raises:
            TableRangeError: t が [0, T] の外の場合
        """
        horizon = self.grid.horizon
        if not np.isfinite(t) or t < -_SNAP_TOL * horizon or t > horizon * (1 + _SNAP_TOL):
            raise TableRangeError(self.name, float(t))

        position = min(max(t / self.grid.dt, 0.0), float(self.grid.steps))
        nearest = round(position)
        if abs(position - nearest) < _SNAP_TOL * max(1.0, position):
            return self._unwrap(self.values[nearest])

        lower = min(int(np.floor(position)), self.grid.steps - 1)
        weight = position - lower
        return self._unwrap((1.0 - weight) * self.values[lower] + weight * self.values[lower + 1])

    def map(self, name: str, func: Callable[[np.ndarray], np.ndarray]) -> "DeterministicTable":
        """値全体に関数を適用した新しいテーブル"""
        return DeterministicTable(name, self.grid, func(self.values))

    def columns(self) -> dict[str, np.ndarray]:
        """CSV用の列（行列値は name_ij に展開）"""
        if not self.value_shape:
            return {self.name: self.values}
        flat = self.values.reshape(len(self.grid), -1)
        if len(self.value_shape) == 1:
            return {f"{self.name}_{i + 1}": flat[:, i] for i in range(flat.shape[1])}
        rows, cols = self.value_shape
        return {
            f"{self.name}_{i + 1}{j + 1}": self.values[:, i, j]
            for i in range(rows)
            for j in range(cols)
        }

    @staticmethod
    def _unwrap(value: np.ndarray) -> np.ndarray | float:
        return float(value) if np.ndim(value) == 0 else value


def tables_to_rows(
    tables: Mapping[str, DeterministicTable] | list[DeterministicTable],
) -> tuple[list[str], list[list[float]]]:
    """
    同一グリッド上のテーブル群を CSV の (ヘッダー, 行) に変換

    Args:
        tables: テーブルのリスト、または 列名→テーブル の辞書

    Returns:
        (ヘッダー, 行) のタプル
    """
    items = list(tables.values()) if isinstance(tables, Mapping) else list(tables)
    if not items:
        raise ValueError("no tables given")
    grid = items[0].grid
    columns: dict[str, np.ndarray] = {"t": grid.times}
    for table in items:
        if (table.grid.horizon, table.grid.steps) != (grid.horizon, grid.steps):
            raise ValueError(f"table {table.name!r} is on a different grid")
        columns.update(table.columns())
    header = list(columns)
    stacked = np.column_stack([columns[h] for h in header])
    return header, stacked.tolist()


def write_tables_csv(
    path: Path, tables: Mapping[str, DeterministicTable] | list[DeterministicTable]
) -> Path:
    """
    テーブル群を CSV に書き出す（ヘッダー t,value...、グリッド点ごとに1行）

    Args:
        path: 出力先
        tables: 同一グリッド上のテーブル

    Returns:
        書き出したパス
    """
    header, rows = tables_to_rows(tables)
    return write_csv(path, header, rows)
