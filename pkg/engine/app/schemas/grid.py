"""
Chebyshev 网格相关Schema定义
"""
import numpy as np
from pydantic import Field

from .common import ArrayModel


class ChebyshevGrid(ArrayModel):
    """[-1,1] 上的 Chebyshev–Lobatto 点及一阶谱微分矩阵"""
    n: int = Field(..., ge=2, description="节点数")
    nodes: np.ndarray = Field(..., description="升序节点 -cos(jπ/(n-1))")
    diff: np.ndarray = Field(..., description="n×n 谱微分矩阵")


class MappedGrid(ArrayModel):
    """仿射映射到 [0,a] 的网格"""
    base: ChebyshevGrid = Field(..., description="基础网格")
    a: float = Field(..., gt=0, description="区间长度")
    mapped: np.ndarray = Field(..., description="映射后的节点，首尾精确为 0 与 a")

    @property
    def scaled_diff(self) -> np.ndarray:
        """[0,a] 上的微分矩阵 (2/a)·D"""
        return (2.0 / self.a) * self.base.diff
