"""
プロファイル結果の記録と集計
"""

import threading

from .models import BOTTLENECK_SHARE, ProfileResult, ProfileSummary


class ProfileRecorder:
    """プロファイル結果を記録するクラス（スレッドセーフ）"""

    _global_instance: "ProfileRecorder | None" = None
    _global_lock = threading.Lock()

    def __init__(self):
        self._results: list[ProfileResult] = []
        self._lock = threading.Lock()

    @classmethod
    def get_global(cls) -> "ProfileRecorder":
        """グローバルレコーダーを取得"""
        with cls._global_lock:
            if cls._global_instance is None:
                cls._global_instance = cls()
            return cls._global_instance

    @classmethod
    def reset_global(cls) -> None:
        """グローバルレコーダーをリセット"""
        with cls._global_lock:
            cls._global_instance = None

    def record(self, result: ProfileResult) -> None:
        with self._lock:
            self._results.append(result)

    def get_results(self) -> list[ProfileResult]:
        with self._lock:
            return self._results.copy()

    def clear(self) -> None:
        with self._lock:
            self._results.clear()

    def get_summary(self) -> ProfileSummary:
        """
        集計を返す

        Returns:
            ProfileSummary（経過時間が全体の10%以上の段階をボトルネックとする）
        """
        results = self.get_results()
        if not results:
            return ProfileSummary(total_duration=0.0, total_results=0, memory_peak=0)

        total = sum(r.duration for r in results)
        threshold = total * BOTTLENECK_SHARE
        return ProfileSummary(
            total_duration=total,
            total_results=len(results),
            memory_peak=max(r.memory_rss for r in results),
            results=results,
            bottlenecks=[r.name for r in results if r.duration >= threshold],
        )
