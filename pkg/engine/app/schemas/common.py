"""
通用Schema定义
"""
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class ErrorResponse(BaseModel):
    """错误响应（CLI 诊断行的结构化形式）"""
    code: str = Field(..., description="错误码")
    message: str = Field(..., description="错误消息")
    exit_code: Optional[int] = Field(None, description="进程退出码")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "code": "INVALID_ARGUMENT",
                "message": "参数缺失或非法",
                "exit_code": 2
            }
        }
    )

    def line(self) -> str:
        """格式化为 stderr 诊断行"""
        return f"ERROR {self.code}: {self.message}"


class ArrayModel(BaseModel):
    """
    携带 numpy 数组的不可变模型基类

    构造完成后所有 ndarray 字段被设为只读
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def model_post_init(self, __context: Any) -> None:
        for name in type(self).model_fields:
            value = getattr(self, name)
            if isinstance(value, np.ndarray):
                value.flags.writeable = False
