"""
数值表复现服务

只复现 Levin 列（竞争方法列不在范围内）：
- ta0：经典 Levin + Radau 点在 log_unit 上的失效
- ta1：Chebyshev 矩 m = 2..6，n = m+1
- ta2：e^x 振幅在线性/二次振子上的 n 收敛
- ta4_levin：cos(4x)/(x²+x+1) 在 [-1,1] 上的 Levin 列
- ta6_levin：正弦扰动振子的 Levin 列
- fig1：固定 n 的缩放误差 |E|·w²/(1+log w) 随 w 的变化
"""
import logging
from typing import Dict, List, Optional

from app.core.exceptions import UsageError
from app.schemas.records import CsvRecord, TableBlock
from app.services.integration_service import IntegrationService, get_integration_service

logger = logging.getLogger(__name__)

_DECADES = [10.0, 1e2, 1e3, 1e4]
_FIG1_W = [10.0 ** (2.0 + 0.5 * k) for k in range(7)]

TABLES: Dict[str, List[TableBlock]] = {
    "ta0": [
        TableBlock(problem="log_unit", method="classic", grid_kind="radau",
                   w_list=_DECADES, n_list=[4, 8, 16, 32, 64]),
    ],
    "ta1": [
        TableBlock(problem=f"cheb_moment_{m}", method="log_linear",
                   w_list=_DECADES, n_list=[m + 1])
        for m in range(2, 7)
    ],
    "ta2": [
        TableBlock(problem="exp_log_linear", method="log_linear",
                   w_list=[1e2, 1e5], n_list=[6, 7, 8, 9, 10, 11]),
        TableBlock(problem="exp_log_nonlinear", method="log_general",
                   w_list=[1e2, 1e5], n_list=[8, 10, 12, 14, 16, 18]),
    ],
    "ta4_levin": [
        TableBlock(problem="cos_rational", method="log_linear",
                   w_list=[1e2, 1e3], n_list=list(range(16, 29, 2))),
    ],
    "ta6_levin": [
        TableBlock(problem="osc_sin", method="log_general",
                   w_list=[1e2, 1e3, 1e4], n_list=list(range(12, 25, 2)),
                   allow_high_n=True),
    ],
    "fig1": [
        TableBlock(problem="exp_log_linear", method="log_linear",
                   w_list=_FIG1_W, n_list=[8, 12]),
        TableBlock(problem="exp_log_nonlinear", method="log_general",
                   w_list=_FIG1_W, n_list=[8, 12]),
    ],
}


class TableService:
    """表复现服务"""

    def __init__(self, integration: Optional[IntegrationService] = None):
        self.integration = integration or get_integration_service()

    @staticmethod
    def table_ids() -> List[str]:
        return list(TABLES)

    def run(self, table_id: str, workers: Optional[int] = None) -> List[CsvRecord]:
        """
        按表定义逐块扫描

        Args:
            table_id: 表标识
            workers: 并发线程数

        Returns:
            各块记录依次拼接
        """
        blocks = TABLES.get(table_id)
        if blocks is None:
            raise UsageError(f"未知表: {table_id}（可选: {', '.join(TABLES)}）")

        records: List[CsvRecord] = []
        for block in blocks:
            logger.info(f"{table_id}: {block.problem} / {block.method}")
            records.extend(self.integration.sweep(
                block.problem, block.w_list, block.n_list, block.method,
                grid_kind=block.grid_kind, workers=workers,
                allow_high_n=block.allow_high_n,
            ))
        return records


def table(table_id: str, workers: Optional[int] = None) -> List[CsvRecord]:
    return TableService().run(table_id, workers=workers)
