"""
共通ユーティリティ
"""

from .exceptions import BrokerSimError, ConfigError, NumericalError
from .logger import get_logger, setup_logger

__all__ = ["BrokerSimError", "ConfigError", "NumericalError", "get_logger", "setup_logger"]
