"""
プロファイル結果のデータモデル
"""

from datetime import datetime

from pydantic import BaseModel, Field

# 全体の実行時間に対してこの割合以上を占める段階をボトルネックとみなす
BOTTLENECK_SHARE = 0.1


class ProfileResult(BaseModel):
    """1つの処理段階の測定結果"""

    name: str = Field(..., description="処理段階の名前（例: solve.trader, experiment.batches）")
    duration: float = Field(..., ge=0.0, description="経過時間（秒）")
    cpu_time: float = Field(default=0.0, ge=0.0, description="プロセスCPU時間（秒、user+system）")
    memory_rss: int = Field(..., ge=0, description="終了時のRSS（バイト）")
    memory_delta: int = Field(..., description="RSSの増加量（バイト）")
    timestamp: datetime = Field(default_factory=datetime.now, description="測定日時")

    @property
    def cpu_utilisation(self) -> float:
        """CPU時間 / 経過時間（マルチスレッドでは1を超えうる）"""
        return self.cpu_time / self.duration if self.duration > 0 else 0.0


class ProfileSummary(BaseModel):
    """測定結果の集計"""

    total_duration: float = Field(..., description="総経過時間（秒）")
    total_results: int = Field(..., description="測定結果の数")
    memory_peak: int = Field(..., description="測定中の最大RSS（バイト）")
    results: list[ProfileResult] = Field(default_factory=list, description="測定結果")
    bottlenecks: list[str] = Field(default_factory=list, description="ボトルネックの段階名")
