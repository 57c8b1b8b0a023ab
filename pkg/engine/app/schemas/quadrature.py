"""
积分问题与求积结果Schema定义
"""
from typing import Any, Callable, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

# 振幅、相位及其导数均为向量化函数：接受 numpy 数组，返回同形数组
ArrayFunction = Callable[[Any], Any]

QuadratureMethod = Literal["classic", "log_linear", "log_general"]
ReferenceSource = Literal["closed_form", "adaptive", "high_n_levin"]


class Oscillator(BaseModel):
    """振子 g 及其导数 g'"""
    g: ArrayFunction = Field(..., description="相位函数 g")
    gprime: ArrayFunction = Field(..., description="用户给定的导数 g'")
    descriptor: str = Field("g", description="文字描述")
    affine_slope: Optional[float] = Field(
        None, description="若 g(x)=s·x+c 为仿射函数，则为斜率 s"
    )

    model_config = ConfigDict(frozen=True)

    @classmethod
    def linear(cls) -> "Oscillator":
        """线性振子 g(x)=x"""
        return cls(g=lambda x: x, gprime=_ones_like, descriptor="x", affine_slope=1.0)

    @property
    def is_identity(self) -> bool:
        """归一化后是否为 g(x)=x（线性振子算法的适用条件）"""
        return self.affine_slope == 1.0


class IntegralProblem(BaseModel):
    """
    I = phase · ∫_0^a f(x) [log x] e^{iwg(x)} dx
    """
    f: ArrayFunction = Field(..., description="振幅函数 f（可为复值）")
    osc: Oscillator = Field(..., description="振子")
    a: float = Field(..., gt=0, description="区间右端点")
    w: float = Field(..., description="频率（非零）")
    singular: bool = Field(True, description="是否含 log x 权")
    phase: complex = Field(1 + 0j, description="归一化累积的单位模相位因子")
    fliplabel: bool = Field(False, description="归一化时是否翻转了 w 的符号")
    normalized: bool = Field(False, description="是否已归一化")

    model_config = ConfigDict(frozen=True)


class QuadratureResult(BaseModel):
    """求积结果及求解器诊断"""
    value: complex = Field(..., description="积分近似值")
    n: int = Field(..., ge=1, description="节点数")
    rank_used: int = Field(..., ge=0, description="TSVD 保留秩")
    residual_inf: float = Field(..., ge=0, description="各次求解的最大残差 ‖Lx-b‖∞")
    method: QuadratureMethod = Field(..., description="使用的方法")

    model_config = ConfigDict(frozen=True)


class ReferenceValue(BaseModel):
    """独立参考值"""
    value: complex = Field(..., description="参考值")
    source: ReferenceSource = Field(..., description="来源")
    est_error: float = Field(0.0, ge=0, description="误差估计")

    model_config = ConfigDict(frozen=True)


def _ones_like(x):
    return np.ones_like(np.asarray(x, dtype=float))
