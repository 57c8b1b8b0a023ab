"""数值内核"""
from .exceptions import (
    LevinqError,
    InvalidArgumentError,
    UsageError,
    DomainError,
    NumericFailureError,
    UnsupportedProblemError,
    FrequencyTooLowError,
)

__all__ = [
    "LevinqError",
    "InvalidArgumentError",
    "UsageError",
    "DomainError",
    "NumericFailureError",
    "UnsupportedProblemError",
    "FrequencyTooLowError",
]
