"""
パスごとの乱数ストリーム

パス n の乱数は (base_seed, n) だけで決まるため、バッチ分割やワーカー数に
依存せず再現できる。同じパス番号の全戦略アームは同じ増分を共有する。
"""

from collections.abc import Sequence

import numpy as np

# 1ステップあたりの標準正規乱数: (W^S, W^⊥, W^U)
NOISE_DIM = 3


def path_rng(base_seed: int, path_index: int) -> np.random.Generator:
    """パス番号から独立な乱数生成器を作る"""
    return np.random.default_rng(np.random.SeedSequence(base_seed, spawn_key=(path_index,)))


def draw_path_noise(
    base_seed: int, path_index: int, steps: int, mispecify_qi: bool = False
) -> tuple[np.ndarray, float]:
    """
    1本のパスの標準正規乱数と初期在庫を引く

    Args:
        base_seed: ベースシード
        path_index: パス番号
        steps: ステップ数 N
        mispecify_qi: True の場合 Q^I_0 ~ N(0,1) を引く

    Returns:
        (形状 (N, 3) の乱数, Q^I_0)
    """
    rng = path_rng(base_seed, path_index)
    noise = rng.standard_normal((steps, NOISE_DIM))
    qI0 = float(rng.standard_normal()) if mispecify_qi else 0.0
    return noise, qI0


def draw_batch_noise(
    base_seed: int, path_indices: Sequence[int], steps: int, mispecify_qi: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """
    複数パスの乱数をまとめて引く

    Returns:
        (形状 (N, P, 3) の乱数, 形状 (P,) の Q^I_0)
    """
    noise = np.empty((steps, len(path_indices), NOISE_DIM))
    qI0 = np.zeros(len(path_indices))
    for column, index in enumerate(path_indices):
        noise[:, column, :], qI0[column] = draw_path_noise(base_seed, index, steps, mispecify_qi)
    return noise, qI0
