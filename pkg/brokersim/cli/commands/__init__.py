"""
CLI Commands package
"""

from .base import BaseCommand
from .coeffs import CoeffsCommand
from .diag import DiagCommand
from .experiment import ExperimentCommand
from .path import PathCommand
from .stress import StressCommand

__all__ = [
    "BaseCommand",
    "CoeffsCommand",
    "DiagCommand",
    "ExperimentCommand",
    "PathCommand",
    "StressCommand",
]
