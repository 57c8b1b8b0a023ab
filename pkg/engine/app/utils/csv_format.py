"""
CSV 输出工具

数值列统一按 settings.csv_digits 位有效数字序列化（17 位可无损往返 double）
"""
import csv
from typing import IO, Iterable, List, Optional

from app.config import settings
from app.schemas.records import CSV_COLUMNS, CsvRecord


def format_number(value, digits: Optional[int] = None) -> str:
    """
    数值格式化

    Args:
        value: 数值，None 表示空单元格
        digits: 有效位数（默认 settings.csv_digits）

    Returns:
        字符串
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    digits = digits or settings.csv_digits
    return format(float(value), f".{digits}g")


def record_to_row(record: CsvRecord) -> List[str]:
    """CsvRecord 按 CSV_COLUMNS 顺序转为一行字符串"""
    row = []
    for column in CSV_COLUMNS:
        value = getattr(record, column)
        if column == "time_ms":
            # 耗时不参与确定性比较，保留 3 位小数即可
            row.append(f"{float(value):.3f}")
        elif isinstance(value, str):
            row.append(value)
        else:
            row.append(format_number(value))
    return row


def write_records(records: Iterable[CsvRecord], stream: IO[str]) -> int:
    """
    写出表头与所有记录

    Returns:
        写出的记录条数（不含表头）
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    count = 0
    for record in records:
        writer.writerow(record_to_row(record))
        count += 1
    return count
