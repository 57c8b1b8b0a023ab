"""
应用配置管理

使用 pydantic-settings 从环境变量加载配置（前缀 LEVINQ_）
"""
from pathlib import Path
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """全局数值配置"""

    # ========== 基础配置 ==========
    app_name: str = Field(default="levinq", description="应用名称")
    log_level: str = Field(default="WARNING", description="日志级别")

    # ========== 线性代数配置 ==========
    tsvd_rel_tol: float = Field(default=1e-13, description="TSVD 相对截断阈值（相对 σ_0）")
    jacobi_max_sweeps: int = Field(default=60, description="单边 Jacobi 最大扫描次数")
    jacobi_tol: float = Field(default=1e-15, description="Jacobi 列正交判定阈值")

    # ========== 特殊函数配置 ==========
    gamma_switch: float = Field(default=4.0, description="Γ(0,z) 级数/连分式切换半径")
    cf_max_iter: int = Field(default=10000, description="连分式最大迭代次数")
    cf_tiny: float = Field(default=1e-300, description="Lentz 算法下限值")
    cf_eps: float = Field(default=4.4e-16, description="连分式收敛阈值")
    series_rel_stop: float = Field(default=1e-18, description="幂级数截断相对阈值")

    # ========== Levin 方法配置 ==========
    w_min: float = Field(default=1.0, description="Levin 路径允许的最小 |w|")
    normalization_check_points: int = Field(default=33, description="振子归一化检查点数")

    # ========== 参考值（oracle）配置 ==========
    oracle_tol: float = Field(default=1e-13, description="自适应参考积分容差")
    oracle_cut: float = Field(default=0.25, description="对数代换分割点 x_c")
    oracle_t_min: float = Field(default=35.0, description="对数代换最小截断 t_max")
    oracle_max_points: int = Field(default=128, description="每个子区间最大 Gauss-Legendre 点数")
    oracle_max_panels: int = Field(default=200000, description="最大子区间数")
    oracle_w_max: float = Field(default=1e4, description="自适应参考积分允许的最大 |w|")
    reference_oracle_w_max: float = Field(default=1e3, description="误差列自动使用 oracle 的最大 |w|")
    reference_high_n: int = Field(default=48, description="高阶 Levin 参考值节点数")
    companion_levin_n: int = Field(default=32, description="非线性振子闭式中伴随积分的经典 Levin 节点数")

    # ========== 输出配置 ==========
    csv_digits: int = Field(default=17, description="CSV 数值有效位数")
    sweep_workers: int = Field(default=4, description="扫描并发线程数")

    model_config = SettingsConfigDict(
        # settings.py -> config -> app -> engine -> project root
        env_file=str(Path(__file__).resolve().parents[3] / ".env"),
        env_file_encoding="utf-8",
        env_prefix="LEVINQ_",
        case_sensitive=False,
        extra="ignore"
    )


# 全局配置实例
settings = Settings()
