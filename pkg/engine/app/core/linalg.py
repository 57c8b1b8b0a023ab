"""
稠密复线性代数

- 单边 Jacobi（Hestenes）复 SVD，采用循环赛（round-robin）配对，
  每一轮对互不相交的列对做向量化旋转
- 截断 SVD 最小范数最小二乘求解；同一矩阵的多个右端项共用一次分解
"""
import logging
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from app.config import settings
from app.core.exceptions import InvalidArgumentError, NumericFailureError
from app.schemas.linalg import SolveReport, SvdFactorization

logger = logging.getLogger(__name__)


def as_complex_matrix(a) -> np.ndarray:
    """校验并转换为有限值的二维 complex128 矩阵"""
    mat = np.array(a, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
        raise InvalidArgumentError(f"需要非空二维矩阵，收到形状 {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise InvalidArgumentError(f"{mat.shape[0]}×{mat.shape[1]} 矩阵含非有限元素")
    return mat


@lru_cache(maxsize=64)
def _round_robin(n: int) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    """n 列的循环赛配对表：每轮给出互不相交的 (p, q) 列索引数组"""
    size = n + (n % 2)
    players = list(range(size))
    rounds: List[Tuple[np.ndarray, np.ndarray]] = []
    for _ in range(size - 1):
        ps, qs = [], []
        for i in range(size // 2):
            p, q = players[i], players[size - 1 - i]
            # 奇数列时 n 为轮空位
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        if ps:
            rounds.append((np.array(ps), np.array(qs)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def _complete_orthonormal(u: np.ndarray, missing: np.ndarray) -> np.ndarray:
    """为零奇异值对应的列补齐正交单位向量（对标准基做 Gram–Schmidt）"""
    m = u.shape[0]
    done = ~missing
    for col in np.nonzero(missing)[0]:
        basis = u[:, done]
        for k in range(m):
            e = np.zeros(m, dtype=np.complex128)
            e[k] = 1.0
            # 两次正交化
            for _ in range(2):
                e = e - basis @ (basis.conj().T @ e)
            norm = np.linalg.norm(e)
            if norm > 0.5:
                u[:, col] = e / norm
                done[col] = True
                break
    return u


def svd(a, max_sweeps: Optional[int] = None) -> SvdFactorization:
    """
    复矩阵薄 SVD：A = U·diag(σ)·V*

    Args:
        a: m×n 复矩阵
        max_sweeps: 最大扫描次数（默认 settings.jacobi_max_sweeps）

    Returns:
        SvdFactorization，σ 降序，k = min(m, n)
    """
    mat = as_complex_matrix(a)
    m, n = mat.shape
    if m < n:
        # 宽矩阵：分解 A* 后交换 U、V
        fact = svd(mat.conj().T, max_sweeps=max_sweeps)
        return SvdFactorization(
            u=np.array(fact.v), sigma=np.array(fact.sigma),
            v=np.array(fact.u), sweeps=fact.sweeps
        )

    max_sweeps = max_sweeps or settings.jacobi_max_sweeps
    tol = max(settings.jacobi_tol, m * np.finfo(float).eps)
    work = mat.copy()
    v = np.eye(n, dtype=np.complex128)
    rounds = _round_robin(n)

    sweeps = 0
    converged = n == 1
    while not converged:
        if sweeps >= max_sweeps:
            raise NumericFailureError(
                f"单边 Jacobi SVD 在 {max_sweeps} 次扫描内未收敛（矩阵 {m}×{n}）"
            )
        sweeps += 1
        rotated = False
        for p, q in rounds:
            ap = work[:, p]
            aq = work[:, q]
            alpha = np.sum(np.abs(ap) ** 2, axis=0)
            beta = np.sum(np.abs(aq) ** 2, axis=0)
            gamma = np.sum(ap.conj() * aq, axis=0)
            abs_gamma = np.abs(gamma)

            active = abs_gamma > tol * np.sqrt(alpha * beta)
            if not np.any(active):
                continue
            rotated = True
            p, q = p[active], q[active]
            alpha, beta = alpha[active], beta[active]
            gamma, abs_gamma = gamma[active], abs_gamma[active]

            zeta = (beta - alpha) / (2.0 * abs_gamma)
            sign = np.where(zeta >= 0.0, 1.0, -1.0)
            t = sign / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            # 先把第 q 列乘以 e^{-iφ} 使内积为实数，再做实 Givens 旋转
            unit = (gamma / abs_gamma).conj()

            for target in (work, v):
                xp = target[:, p]
                xq = target[:, q] * unit
                target[:, p] = c * xp - s * xq
                target[:, q] = s * xp + c * xq
        converged = not rotated

    sigma = np.linalg.norm(work, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    work = work[:, order]
    v = v[:, order]

    zero = sigma == 0.0
    u = np.zeros_like(work)
    u[:, ~zero] = work[:, ~zero] / sigma[~zero]
    if np.any(zero):
        u = _complete_orthonormal(u, zero)

    return SvdFactorization(u=u, sigma=sigma, v=v, sweeps=sweeps)


class TruncatedSvdSolver:
    """
    截断 SVD 最小二乘求解器

    一次分解，多个右端项共用相同的截断阈值与秩
    """

    def __init__(self, a, rel_tol: Optional[float] = None):
        """
        Args:
            a: 系数矩阵
            rel_tol: 相对截断阈值，保留 σ_i > rel_tol·σ_0 的奇异三元组
        """
        rel_tol = settings.tsvd_rel_tol if rel_tol is None else rel_tol
        if not (0.0 < rel_tol < 1.0):
            raise InvalidArgumentError(f"rel_tol 必须位于 (0,1)，收到 {rel_tol}")
        self.matrix = as_complex_matrix(a)
        self.rel_tol = float(rel_tol)
        self.factorization = svd(self.matrix)

        sigma = self.factorization.sigma
        self.sigma_max = float(sigma[0])
        self.sigma_min = float(sigma[-1])
        if self.sigma_max == 0.0:
            self.rank = 0
        else:
            self.rank = int(np.count_nonzero(sigma > self.rel_tol * self.sigma_max))

        full = min(self.matrix.shape)
        if 0 < self.rank < full:
            logger.info(
                f"TSVD 截断: {self.matrix.shape[0]}×{self.matrix.shape[1]} 矩阵保留秩 "
                f"{self.rank}/{full}（σ_max={self.sigma_max:.3e}, σ_min={self.sigma_min:.3e}）"
            )

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    def solve(self, b) -> SolveReport:
        """求最小范数截断最小二乘解"""
        rhs = np.asarray(b, dtype=np.complex128).reshape(-1)
        m, n = self.matrix.shape
        if rhs.size != m:
            raise InvalidArgumentError(f"右端项长度 {rhs.size} 与矩阵行数 {m} 不一致")
        if not np.all(np.isfinite(rhs)):
            raise InvalidArgumentError("右端项含非有限元素")

        if self.rank == 0:
            logger.warning(f"{m}×{n} 矩阵 σ_0 = 0，返回零解")
            solution = np.zeros(n, dtype=np.complex128)
        else:
            r = self.rank
            fact = self.factorization
            coeffs = (fact.u[:, :r].conj().T @ rhs) / fact.sigma[:r]
            solution = fact.v[:, :r] @ coeffs

        residual = self.matrix @ solution - rhs
        return SolveReport(
            solution=solution,
            rank_used=self.rank,
            residual_inf=float(np.max(np.abs(residual))),
            sigma_max=self.sigma_max,
            sigma_min=self.sigma_min,
            degenerate=self.rank == 0,
        )


def tsvd_solve(a, b, rel_tol: Optional[float] = None) -> SolveReport:
    """
    截断 SVD 最小二乘求解（单个右端项的便捷入口）

    Args:
        a: m×n 复矩阵
        b: 长度 m 的右端项
        rel_tol: 相对截断阈值（默认 settings.tsvd_rel_tol）

    Returns:
        SolveReport
    """
    rhs = np.asarray(b).reshape(-1)
    mat = as_complex_matrix(a)
    if rhs.size != mat.shape[0]:
        raise InvalidArgumentError(f"右端项长度 {rhs.size} 与矩阵行数 {mat.shape[0]} 不一致")
    return TruncatedSvdSolver(mat, rel_tol=rel_tol).solve(rhs)
