"""
数値積分と係数テーブル
"""

from .integrator import Direction, rk4_integrate, solve_scalar_riccati
from .table import DeterministicTable, tables_to_rows, write_tables_csv

__all__ = [
    "DeterministicTable",
    "Direction",
    "rk4_integrate",
    "solve_scalar_riccati",
    "tables_to_rows",
    "write_tables_csv",
]
