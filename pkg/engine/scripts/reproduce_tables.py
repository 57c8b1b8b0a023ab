#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
批量复现所有数值表，CSV 写入 results/ 目录

使用方法:
    python engine/scripts/reproduce_tables.py             # 全部表
    python engine/scripts/reproduce_tables.py ta1 ta2     # 指定表
"""
import sys
from pathlib import Path

engine_dir = Path(__file__).parent.parent
sys.path.insert(0, str(engine_dir))

from app.services.table_service import TableService
from app.utils.csv_format import write_records

RESULTS_DIR = engine_dir.parent / "results"


def reproduce(table_ids):
    """逐表运行并打印每表最大绝对误差"""
    RESULTS_DIR.mkdir(exist_ok=True)
    service = TableService()

    for table_id in table_ids:
        print(f"🔄 正在复现 {table_id} ...")
        records = service.run(table_id)
        path = RESULTS_DIR / f"{table_id}.csv"
        with open(path, "w", encoding="utf-8", newline="") as stream:
            write_records(records, stream)

        errors = [r.abs_err for r in records if r.abs_err is not None]
        failed = sum(1 for r in records if r.failed)
        worst = f"{max(errors):.4e}" if errors else "-"
        print(f"   ✅ {len(records)} 行 → {path}（最大绝对误差 {worst}，失败 {failed} 行）")

    print("✅ 全部完成")


if __name__ == "__main__":
    requested = sys.argv[1:] or TableService.table_ids()
    unknown = [t for t in requested if t not in TableService.table_ids()]
    if unknown:
        print(f"❌ 未知表: {', '.join(unknown)}")
        sys.exit(2)
    reproduce(requested)
