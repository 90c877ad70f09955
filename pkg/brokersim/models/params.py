"""
モデルパラメータと時間グリッド
"""

from functools import lru_cache
import hashlib

import numpy as np
from pydantic import ConfigDict, Field

from .base import BrokerSimBaseModel

# ストレステストの対象となる学習パラメータ
LEARNING_PARAMETERS = ("kappa_alpha", "sigma_alpha", "theta_b", "sigma_b")


class ModelParams(BrokerSimBaseModel):
    """市場モデルと両エージェントの定数"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    permanent_impact: float = Field(default=1e-3, ge=0.0, description="恒久的価格インパクト p")
    broker_cost: float = Field(default=2.1e-3, gt=0.0, description="ブローカーの一時的インパクト a")
    trader_cost: float = Field(default=2e-3, gt=0.0, description="情報トレーダーの手数料 b")
    flow_cost: float = Field(default=2e-3, gt=0.0, description="非情報フローの手数料 c")
    sigma_s: float = Field(default=1.0, gt=0.0, description="価格ボラティリティ")
    s0: float = Field(default=100.0, description="初期価格")
    kappa_alpha: float = Field(default=5.0, ge=0.0, description="シグナルの平均回帰速度")
    sigma_alpha: float = Field(default=1.0, ge=0.0, description="シグナルのボラティリティ")
    alpha0: float = Field(default=0.0, description="シグナルの初期値")
    rho: float = Field(default=0.0, ge=-1.0, le=1.0, description="価格とシグナルの相関")
    kappa_u: float = Field(default=15.0, ge=0.0, description="非情報フローの平均回帰速度")
    sigma_u: float = Field(default=100.0, ge=0.0, description="非情報フローのボラティリティ")
    theta_b: float = Field(default=10.0, gt=0.0, description="トレーダーが想定するブローカー速度の平均回帰")
    sigma_b: float = Field(default=60.0, ge=0.0, description="トレーダーが想定するブローカー速度のボラティリティ")
    beta0_i: float = Field(default=0.1, gt=0.0, description="トレーダーの終端在庫ペナルティ（定数項）")
    beta1_i: float = Field(default=1e-3, gt=0.0, description="トレーダーの終端在庫ペナルティ（分散項）")
    rho0_i: float = Field(default=1e-3, gt=0.0, description="トレーダーの在庫ランニングペナルティ（定数項）")
    rho1_i: float = Field(default=1e-5, gt=0.0, description="トレーダーの在庫ランニングペナルティ（分散項）")
    beta0_b: float = Field(default=0.1, gt=0.0, description="ブローカーの終端在庫ペナルティ（定数項）")
    beta1_b: float = Field(default=1e-3, gt=0.0, description="ブローカーの終端在庫ペナルティ（分散項）")
    rho0_b: float = Field(default=1e-3, gt=0.0, description="ブローカーの在庫ランニングペナルティ（定数項）")
    rho1_b: float = Field(default=1e-5, gt=0.0, description="ブローカーの在庫ランニングペナルティ（分散項）")
    c_belief: float = Field(default=1.0, description="ブローカーの二次的信念（η* 内の f2 の倍率）")

    def params_hash(self) -> str:
        """パラメータ集合のSHA-256ハッシュ（先頭16文字）"""
        payload = self.model_dump_json().encode("utf-8")
        return hashlib.sha256(payload).hexdigest()[:16]

    def scaled(self, name: str, multiplier: float) -> "ModelParams":
        """
        1つのパラメータを倍率で変更したコピーを返す

        Args:
            name: パラメータ名
            multiplier: 倍率

        Returns:
            検証済みの新しいパラメータ
        """
        data = self.model_dump()
        if name not in data:
            raise KeyError(name)
        data[name] = data[name] * multiplier
        return ModelParams(**data)


class TimeGrid(BrokerSimBaseModel):
    """[0, T] の等間隔グリッド"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    horizon: float = Field(default=1.0, gt=0.0, description="取引期間 T")
    steps: int = Field(default=1000, ge=2, description="区間数 N")

    @property
    def dt(self) -> float:
        """時間刻み T/N"""
        return self.horizon / self.steps

    @property
    def times(self) -> np.ndarray:
        """グリッド点 t_k (k=0..N)、t_N = T は厳密"""
        return _grid_points(self.horizon, self.steps)

    def __len__(self) -> int:
        return self.steps + 1


@lru_cache(maxsize=32)
def _grid_points(horizon: float, steps: int) -> np.ndarray:
    grid = np.linspace(0.0, horizon, steps + 1)
    grid.setflags(write=False)
    return grid
