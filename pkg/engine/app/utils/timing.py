"""计时工具"""
import time


class Stopwatch:
    """上下文管理器形式的毫秒计时器"""

    def __init__(self):
        self._start = 0.0
        self.elapsed_ms = 0.0

    def __enter__(self) -> "Stopwatch":
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        self.elapsed_ms = (time.perf_counter() - self._start) * 1000.0
        return False
