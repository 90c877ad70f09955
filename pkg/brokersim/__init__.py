"""
ブローカーと情報トレーダーのフィルタリングゲームのシミュレーター

ブローカーはトレーダーの注文フローと価格からシグナルを推定し、
内部化と外部化を最適に切り替える。係数ODEの求解、単一パスの
シミュレーション、ベンチマークとのモンテカルロ比較を提供する。
"""

import importlib.metadata

try:
    __version__ = importlib.metadata.version("broker-filter-sim")
except importlib.metadata.PackageNotFoundError:
    __version__ = "0.0.0"

from .brokersim import BrokerSim, main

__all__ = ["BrokerSim", "main"]
