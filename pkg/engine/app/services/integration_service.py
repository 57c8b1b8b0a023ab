"""
积分服务

- integrate：单个 (问题, w, n, 方法) 的求积，并附参考误差列
- sweep：(w, n) 网格扫描，行按 w 主序、n 次序输出，可并发计算
"""
import logging
import math
import threading
from concurrent.futures import Future, ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from app.config import settings
from app.core.exceptions import (
    InvalidArgumentError,
    LevinqError,
    NumericFailureError,
    UsageError,
)
from app.schemas.quadrature import ReferenceValue
from app.schemas.records import CsvRecord, ProblemEntry
from app.services.levin import combine_results, solve_problem
from app.services.oracle import adaptive_reference, reference_value
from app.services.problem_registry import ProblemRegistry, build_problems, get_problem_registry
from app.utils.timing import Stopwatch

logger = logging.getLogger(__name__)

CLI_METHODS = ("classic", "log_linear", "log_general", "oracle")


def scaled_error(abs_err: Optional[float], w: float) -> Optional[float]:
    """|E|·w²/(1+log|w|)，|w| < 1 时不定义"""
    if abs_err is None or abs(w) < 1.0:
        return None
    return abs_err * w * w / (1.0 + math.log(abs(w)))


class IntegrationService:
    """积分服务（参考值按 (问题, w, tol) 缓存，线程安全）"""

    def __init__(self, registry: Optional[ProblemRegistry] = None):
        self.registry = registry or get_problem_registry()
        self._references: Dict[Tuple[str, float, Optional[float], bool], Future] = {}
        self._lock = threading.Lock()

    def resolve(self, problem: str, method: Optional[str]) -> Tuple[ProblemEntry, str]:
        """校验问题名与方法名，method 为空时取问题默认方法"""
        entry = self.registry.get(problem)
        method = method or entry.default_method
        if method not in CLI_METHODS:
            raise UsageError(f"未知方法: {method}（可选: {', '.join(CLI_METHODS)}）")
        return entry, method

    def reference(
        self,
        entry: ProblemEntry,
        w: float,
        tol: Optional[float] = None,
        allow_high_n: bool = False
    ) -> Optional[ReferenceValue]:
        """参考值（闭式、自适应积分或高阶 Levin），不可用或失败时返回 None"""
        key = (entry.name, float(w), tol, allow_high_n)
        with self._lock:
            pending = self._references.get(key)
            owner = pending is None
            if owner:
                pending = self._references[key] = Future()
        if owner:
            # 锁外计算，同一 key 的其他线程等待 Future
            try:
                value = reference_value(entry, w, allow_high_n=allow_high_n, tol=tol)
            except LevinqError as e:
                logger.warning(f"{entry.name} 在 w={w:g} 处的参考值不可用: {e.message}")
                value = None
            except BaseException as e:
                pending.set_exception(e)
                raise
            pending.set_result(value)
        return pending.result()

    def integrate(
        self,
        problem: str,
        w: float,
        n: int,
        method: Optional[str] = None,
        grid_kind: str = "lobatto",
        tol: Optional[float] = None,
        with_reference: bool = True,
        allow_high_n: bool = False
    ) -> CsvRecord:
        """
        对注册表问题求积

        Args:
            problem: 问题名
            w: 频率
            n: 节点数
            method: classic | log_linear | log_general | oracle（默认取问题默认方法）
            grid_kind: lobatto | radau
            tol: oracle 容差
            with_reference: 是否附参考误差列
            allow_high_n: 无闭式且 |w| 超出 oracle 范围时是否用高阶 Levin 作参考

        Returns:
            CsvRecord
        """
        entry, method = self.resolve(problem, method)
        w = float(w)
        if not math.isfinite(w):
            raise InvalidArgumentError(f"频率必须有限，收到 w={w}")
        notes: List[str] = []

        if method != "oracle" and abs(w) < settings.w_min:
            logger.warning(f"|w|={abs(w):g} < w_min={settings.w_min:g}，{problem} 改用 oracle")
            notes.append("WARNING w below w_min; routed to oracle")
            method = "oracle"

        problems = build_problems(entry, w)
        rank_used = residual = None
        with Stopwatch() as timer:
            if method == "oracle":
                refs = [adaptive_reference(p, tol=tol) for p in problems]
                value = sum((r.value for r in refs), 0j)
                est_error = sum(r.est_error for r in refs)
                notes.append(f"est_error={est_error:.3e}")
            else:
                result = combine_results([solve_problem(p, n, method=method, grid_kind=grid_kind)
                                          for p in problems])
                value = result.value
                rank_used, residual = result.rank_used, result.residual_inf

        abs_err = rel_err = None
        if with_reference and (method != "oracle" or entry.closed_form_id):
            ref = self.reference(entry, w, tol, allow_high_n)
            if ref is not None:
                abs_err = abs(value - ref.value)
                rel_err = abs_err / abs(ref.value) if ref.value != 0 else None
                if ref.source != "closed_form":
                    notes.append(f"ref={ref.source}")

        return CsvRecord(
            method=method, problem=entry.name, w=w, n=int(n),
            value_re=value.real, value_im=value.imag,
            abs_err=abs_err, rel_err=rel_err, scaled_err=scaled_error(abs_err, w),
            rank_used=rank_used, residual_inf=residual,
            time_ms=timer.elapsed_ms, note="; ".join(notes),
        )

    def _row(self, problem: str, w: float, n: int, method: str, grid_kind: str,
             tol: Optional[float], allow_high_n: bool = False) -> CsvRecord:
        """扫描中的一行：错误转为行级 note"""
        try:
            return self.integrate(problem, w, n, method, grid_kind, tol, allow_high_n=allow_high_n)
        except LevinqError as e:
            logger.warning(f"sweep 行失败 ({problem}, w={w:g}, n={n}): {e.code} {e.message}")
            best = getattr(e, "best_estimate", None) if isinstance(e, NumericFailureError) else None
            note = f"ERROR {e.code}: {e.message}"
            if isinstance(e, NumericFailureError) and e.est_error is not None:
                note += f"; est_error={e.est_error:.3e}"
            return CsvRecord(
                method=method, problem=problem, w=float(w), n=int(n),
                value_re=None if best is None else best.real,
                value_im=None if best is None else best.imag,
                note=note,
            )

    def sweep(
        self,
        problem: str,
        w_list: Sequence[float],
        n_list: Sequence[int],
        method: Optional[str] = None,
        grid_kind: str = "lobatto",
        tol: Optional[float] = None,
        workers: Optional[int] = None,
        allow_high_n: bool = False
    ) -> List[CsvRecord]:
        """
        (w, n) 网格扫描

        Returns:
            每个 (w, n) 一条记录，w 主序、n 次序；单行错误不中断扫描
        """
        if not w_list or not n_list:
            raise InvalidArgumentError("w 列表与 n 列表均不能为空")
        entry, method = self.resolve(problem, method)
        pairs = [(float(w), int(n)) for w in w_list for n in n_list]
        workers = max(1, int(workers or settings.sweep_workers))

        logger.info(f"sweep {entry.name}: {len(pairs)} 个 (w, n) 组合，{workers} 线程")
        if workers == 1 or len(pairs) == 1:
            return [self._row(entry.name, w, n, method, grid_kind, tol, allow_high_n) for w, n in pairs]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # map 保持提交顺序
            return list(pool.map(
                lambda wn: self._row(entry.name, wn[0], wn[1], method, grid_kind, tol, allow_high_n), pairs
            ))


_service: Optional[IntegrationService] = None


def get_integration_service() -> IntegrationService:
    """获取全局积分服务实例"""
    global _service
    if _service is None:
        _service = IntegrationService()
    return _service


def integrate(problem: str, w: float, n: int, method: Optional[str] = None, **kwargs) -> CsvRecord:
    return get_integration_service().integrate(problem, w, n, method, **kwargs)


def sweep(problem: str, w_list: Sequence[float], n_list: Sequence[int],
          method: Optional[str] = None, **kwargs) -> List[CsvRecord]:
    return get_integration_service().sweep(problem, w_list, n_list, method, **kwargs)
