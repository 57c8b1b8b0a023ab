#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
levinq 命令行启动脚本

使用方法:
    python levinq.py integrate --problem log_unit --w 10 --n 16 --method log_linear
    python levinq.py table --id ta1
    python levinq.py sweep --problem exp_log_linear --w-list 100,1000 --n-list 8,12
    python levinq.py table --id fig1 --out fig1.csv --verbose
"""
import sys
from pathlib import Path

# 添加 engine 目录到 Python 路径
ENGINE_DIR = Path(__file__).resolve().parent / "engine"
sys.path.insert(0, str(ENGINE_DIR))

from app.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
