"""
Test helpers package
"""

from .assertions import (
    assert_csv_header,
    assert_file_exists,
    assert_symmetric,
)
from .builders import ParamsBuilder, make_path_result, make_report

__all__ = [
    "ParamsBuilder",
    "assert_csv_header",
    "assert_file_exists",
    "assert_symmetric",
    "make_path_result",
    "make_report",
]
