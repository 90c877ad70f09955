"""
実行時プロファイリング

係数ソルバーや実験の各段階の経過時間・CPU時間・メモリを記録します。
"""

from .core import ProfileContext, format_duration, format_memory
from .models import ProfileResult, ProfileSummary
from .recorder import ProfileRecorder

__all__ = [
    "ProfileContext",
    "ProfileRecorder",
    "ProfileResult",
    "ProfileSummary",
    "format_duration",
    "format_memory",
]
