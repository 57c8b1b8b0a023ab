"""
工具函数模块
"""
from .csv_format import format_number, record_to_row, write_records
from .timing import Stopwatch

__all__ = [
    "format_number",
    "record_to_row",
    "write_records",
    "Stopwatch",
]
