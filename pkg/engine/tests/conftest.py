"""
pytest 公共配置
"""
import sys
from pathlib import Path

import numpy as np
import pytest

# 添加 engine 目录到 Python 路径
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))


@pytest.fixture
def rng():
    """固定种子的随机数生成器"""
    return np.random.default_rng(20240611)


@pytest.fixture
def linear_problem():
    """构造线性振子上的奇异问题"""
    from app.schemas.quadrature import IntegralProblem, Oscillator

    def factory(f, w, a=1.0):
        return IntegralProblem(f=f, osc=Oscillator.linear(), a=a, w=w, singular=True)

    return factory
