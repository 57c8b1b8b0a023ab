"""
线性代数相关Schema定义
"""
import numpy as np
from pydantic import Field

from .common import ArrayModel


class SvdFactorization(ArrayModel):
    """复矩阵的薄 SVD：A = U·diag(σ)·V*"""
    u: np.ndarray = Field(..., description="m×k 左奇异向量")
    sigma: np.ndarray = Field(..., description="降序非负奇异值，长度 k=min(m,n)")
    v: np.ndarray = Field(..., description="n×k 右奇异向量")
    sweeps: int = Field(0, ge=0, description="Jacobi 扫描次数")

    @property
    def shape(self) -> tuple:
        return (self.u.shape[0], self.v.shape[0])


class SolveReport(ArrayModel):
    """截断 SVD 最小二乘求解结果及诊断信息"""
    solution: np.ndarray = Field(..., description="解向量")
    rank_used: int = Field(..., ge=0, description="保留的奇异三元组个数")
    residual_inf: float = Field(..., ge=0, description="‖Ax-b‖∞")
    sigma_max: float = Field(..., ge=0, description="最大奇异值")
    sigma_min: float = Field(..., ge=0, description="最小奇异值")
    degenerate: bool = Field(False, description="σ_0 = 0 时为 True（返回零解）")
