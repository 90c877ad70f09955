"""
Unit test fixtures
"""

import numpy as np
import pytest


@pytest.fixture(scope="function")
def rng() -> np.random.Generator:
    """テストごとに固定シードの乱数生成器"""
    return np.random.default_rng(20240601)
