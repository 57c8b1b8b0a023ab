"""
CSV 记录与问题注册表Schema定义
"""
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .quadrature import ArrayFunction, Oscillator

CliMethod = Literal["classic", "log_linear", "log_general", "oracle"]

CSV_COLUMNS = [
    "method", "problem", "w", "n", "value_re", "value_im",
    "abs_err", "rel_err", "scaled_err", "rank_used", "residual_inf",
    "time_ms", "note",
]


class CsvRecord(BaseModel):
    """CSV 输出的一行"""
    method: str = Field(..., description="方法名")
    problem: str = Field(..., description="问题名")
    w: float = Field(..., description="频率")
    n: int = Field(..., description="节点数")
    value_re: Optional[float] = Field(None, description="实部")
    value_im: Optional[float] = Field(None, description="虚部")
    abs_err: Optional[float] = Field(None, description="绝对误差（无参考值时为空）")
    rel_err: Optional[float] = Field(None, description="相对误差（无参考值时为空）")
    scaled_err: Optional[float] = Field(None, description="abs_err·w²/(1+log|w|)")
    rank_used: Optional[int] = Field(None, description="TSVD 保留秩")
    residual_inf: Optional[float] = Field(None, description="最大残差")
    time_ms: float = Field(0.0, description="耗时（毫秒）")
    note: str = Field("", description="警告或行级错误")

    @property
    def failed(self) -> bool:
        """行级错误（note 以 ERROR 开头）"""
        return self.note.startswith("ERROR")


class ProblemPiece(BaseModel):
    """[0,a] 上的一个分片：振幅 f 与频率符号"""
    f: ArrayFunction = Field(..., description="振幅函数")
    w_sign: int = Field(1, description="频率符号 ±1")

    model_config = ConfigDict(frozen=True)


class ProblemEntry(BaseModel):
    """注册表中的一个内置测试问题"""
    name: str = Field(..., description="问题名")
    pieces: List[ProblemPiece] = Field(..., min_length=1, description="分片列表，积分为各分片之和")
    osc: Oscillator = Field(..., description="振子")
    a: float = Field(1.0, gt=0, description="区间长度")
    singular: bool = Field(True, description="是否含 log x 权")
    closed_form_id: Optional[str] = Field(None, description="闭式参考值标识")
    default_method: Literal["classic", "log_linear", "log_general"] = Field(
        "log_linear", description="默认求积方法"
    )
    citation: str = Field("", description="问题说明")

    model_config = ConfigDict(frozen=True)


class TableBlock(BaseModel):
    """复现表中的一块：同一问题与方法下的 (w, n) 网格"""
    problem: str = Field(..., description="问题名")
    method: CliMethod = Field(..., description="求积方法")
    grid_kind: Literal["lobatto", "radau"] = Field("lobatto", description="网格类型")
    w_list: List[float] = Field(..., min_length=1, description="频率列表")
    n_list: List[int] = Field(..., min_length=1, description="节点数列表")
    allow_high_n: bool = Field(False, description="是否允许高阶 Levin 参考值")

    model_config = ConfigDict(frozen=True)
