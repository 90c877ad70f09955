"""
レポート出力
"""

from .experiment_reporter import (
    REPORT_HEADER,
    ExperimentReporter,
    write_bands_csv,
    write_path_csv,
)
from .template_service import TemplateService

__all__ = [
    "REPORT_HEADER",
    "ExperimentReporter",
    "TemplateService",
    "write_bands_csv",
    "write_path_csv",
]
