"""
プロファイル用のコンテキストマネージャーと表示用の整形関数
"""

import os
import time
from typing import Any

import psutil

from .models import ProfileResult
from .recorder import ProfileRecorder


def get_current_process() -> psutil.Process:
    """現在のプロセス"""
    return psutil.Process(os.getpid())


class ProfileContext:
    """処理段階の経過時間・CPU時間・RSSを測る"""

    def __init__(self, name: str, recorder: ProfileRecorder | None = None, enabled: bool = True):
        """
        初期化

        Args:
            name: 処理段階の名前
            recorder: レコーダー（Noneの場合はグローバルレコーダー）
            enabled: Falseの場合は何もしない
        """
        self.name = name
        self.recorder = recorder or ProfileRecorder.get_global()
        self.enabled = enabled
        self.result: ProfileResult | None = None
        self._process: psutil.Process | None = None
        self._start_time: float | None = None
        self._start_cpu = 0.0
        self._start_memory = 0

    def __enter__(self) -> "ProfileContext":
        if not self.enabled:
            return self
        self._process = get_current_process()
        self._start_memory = self._process.memory_info().rss
        self._start_cpu = self._cpu_seconds()
        self._start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        if not self.enabled or self._start_time is None:
            return
        duration = time.perf_counter() - self._start_time
        cpu_time = max(self._cpu_seconds() - self._start_cpu, 0.0)
        memory = self._process.memory_info().rss if self._process else 0

        self.result = ProfileResult(
            name=self.name,
            duration=duration,
            cpu_time=cpu_time,
            memory_rss=memory,
            memory_delta=memory - self._start_memory,
        )
        self.recorder.record(self.result)

    def _cpu_seconds(self) -> float:
        if self._process is None:
            return 0.0
        try:
            times = self._process.cpu_times()
        except (psutil.NoSuchProcess, psutil.AccessDenied):
            return 0.0
        return times.user + times.system


def format_duration(seconds: float) -> str:
    """経過時間を読みやすい単位で表記"""
    if seconds < 0.001:
        return f"{seconds * 1000000:.2f}μs"
    if seconds < 1.0:
        return f"{seconds * 1000:.2f}ms"
    return f"{seconds:.2f}s"


def format_memory(bytes_size: int) -> str:
    """バイト数を読みやすい単位で表記"""
    size = float(bytes_size)
    for unit in ["B", "KB", "MB", "GB"]:
        if abs(size) < 1024.0:
            return f"{size:.2f} {unit}"
        size /= 1024.0
    return f"{size:.2f} TB"
