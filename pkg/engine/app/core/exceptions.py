"""
异常定义

每个异常携带错误码（与 schemas.common.ErrorResponse.code 对应），
CLI 据此映射退出码
"""
from typing import Optional


class LevinqError(Exception):
    """所有 levinq 异常的基类"""
    code: str = "INTERNAL"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InvalidArgumentError(LevinqError, ValueError):
    """参数缺失或非法"""
    code = "INVALID_ARGUMENT"


class UsageError(InvalidArgumentError):
    """命令行用法错误（未知问题名、方法名等）"""
    code = "USAGE"


class DomainError(LevinqError, ValueError):
    """数学定义域错误（如 log 0）"""
    code = "DOMAIN_ERROR"


class NumericFailureError(LevinqError, ArithmeticError):
    """数值迭代未收敛"""
    code = "NUMERIC_FAILURE"

    def __init__(
        self,
        message: str,
        best_estimate: Optional[complex] = None,
        est_error: Optional[float] = None
    ):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.est_error = est_error


class UnsupportedProblemError(LevinqError):
    """问题不满足方法前提（驻点、g(a) ≤ 0 等）"""
    code = "UNSUPPORTED_PROBLEM"


class FrequencyTooLowError(UnsupportedProblemError):
    """|w| 低于 Levin 路径的最小频率"""
    code = "FREQUENCY_TOO_LOW"
