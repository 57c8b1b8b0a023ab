"""
独立参考值（oracle）

- 闭式参考值：log_unit、exp_log_linear、exp_log_nonlinear、cheb_moment_<m>
- 多项式 × log x × e^{iwx} 的分部积分递推矩
- 自适应参考积分：(0, x_c] 上做 x = e^{-t} 代换消去对数奇点，
  其余部分用分段 Gauss–Legendre，每段至多半个振荡周期，全局倍增点数直至收敛
"""
import logging
import math
import re
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import chebyshev as cheb
from numpy.polynomial.legendre import leggauss

from app.config import settings
from app.core.exceptions import (
    DomainError,
    InvalidArgumentError,
    NumericFailureError,
    UnsupportedProblemError,
)
from app.core.special import EULER_GAMMA, ein, sici
from app.schemas.quadrature import IntegralProblem, Oscillator, ReferenceValue
from app.schemas.records import ProblemEntry

logger = logging.getLogger(__name__)

CLOSED_FORM_IDS = ("log_unit", "exp_log_linear", "exp_log_nonlinear")
_CHEB_MOMENT = re.compile(r"^cheb_moment_(\d+)$")


def _check_w(w: float) -> float:
    w = float(w)
    if not math.isfinite(w):
        raise InvalidArgumentError(f"频率必须有限，收到 w={w}")
    if w == 0.0:
        raise DomainError("闭式参考值要求 w ≠ 0")
    return w


# ========== 闭式参考值 ==========

def log_unit(w: float) -> complex:
    """∫_0^1 log x e^{iwx} dx = -Si(w)/w - i(γ - Ci(w) + log w)/w"""
    w = _check_w(w)
    if w < 0.0:
        return log_unit(-w).conjugate()
    si, ci = sici(w)
    return complex(-si / w, -(EULER_GAMMA - ci + math.log(w)) / w)


def exp_log_linear(w: float) -> complex:
    """∫_0^1 e^x log x e^{iwx} dx = Ein(-1-iw)/(1+iw)"""
    w = _check_w(w)
    return (-1j / (w - 1j)) * ein(complex(-1.0, -w))


def exp_log_nonlinear(w: float) -> complex:
    """
    ∫_0^1 (2x+1)e^{x²+x} log x e^{iw(x²+x)} dx

    代换 u = x²+x 后拆成 ∫_0^2 e^{(1+iw)u} log u du（闭式）
    减去非奇异伴随积分 J = ∫_0^1 (2x+1)e^{x²+x} log(x+1) e^{iw(x²+x)} dx，
    J 由经典 Levin 方法（companion_levin_n 个点）计算。
    """
    from app.services.levin import levin_classic

    w = _check_w(w)
    c = complex(1.0, w)
    # γ + Γ(0,-2c) + Log(-c) = Ein(-2c) - log 2
    singular = (ein(-2.0 * c) + (np.exp(2.0 * c) - 1.0) * math.log(2.0)) / c

    def companion(x):
        x = np.asarray(x, dtype=float)
        return (2.0 * x + 1.0) * np.exp(x * x + x) * np.log1p(x)

    osc = Oscillator(g=lambda x: x * x + x, gprime=lambda x: 2.0 * np.asarray(x) + 1.0,
                     descriptor="x^2+x")
    if abs(w) >= settings.w_min:
        j = levin_classic(companion, osc, 1.0, w, settings.companion_levin_n).value
    else:
        j = adaptive_reference(
            IntegralProblem(f=companion, osc=osc, a=1.0, w=w, singular=False)
        ).value
    return complex(singular - j)


def _power_moments(w: float, degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    M_k = ∫_0^1 x^k log x e^{iwx} dx 与 P_k = ∫_0^1 x^k e^{iwx} dx，k = 0..degree

    分部积分前向递推，仅在 |w| ≥ degree 时稳定。
    """
    iw = 1j * w
    ew = np.exp(iw)
    m = np.empty(degree + 1, dtype=np.complex128)
    p = np.empty(degree + 1, dtype=np.complex128)
    m[0] = log_unit(w)
    p[0] = (ew - 1.0) / iw
    for k in range(1, degree + 1):
        m[k] = -(k * m[k - 1] + p[k - 1]) / iw
        p[k] = (ew - k * p[k - 1]) / iw
    return m, p


def poly_log_moments(coeffs: Sequence[complex], w: float) -> complex:
    """
    ∫_0^1 P(x) log x e^{iwx} dx，P(x) = Σ coeffs[k]·x^k

    Args:
        coeffs: 单项式系数（升幂）
        w: 频率

    Returns:
        积分值；|w| < deg P 时改用自适应参考积分
    """
    w = _check_w(w)
    c = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
    if c.size == 0:
        return 0j
    degree = c.size - 1
    if abs(w) < degree:
        logger.info(f"多项式矩递推在 |w|={abs(w):g} < 次数 {degree} 时不稳定，改用自适应积分")
        problem = IntegralProblem(
            f=lambda x: np.polynomial.polynomial.polyval(x, c),
            osc=Oscillator.linear(), a=1.0, w=w, singular=True,
        )
        return adaptive_reference(problem).value
    moments, _ = _power_moments(w, degree)
    return complex(np.dot(c, moments))


def chebyshev_moment(m: int, w: float) -> complex:
    """∫_{-1}^{1} T_m(x) log(x²) e^{iwx} dx = 2·[M(T_m, w) + M(T_m(-x), -w)]"""
    coeffs = cheb.cheb2poly([0.0] * m + [1.0])
    reflected = coeffs * (-1.0) ** np.arange(coeffs.size)
    return 2.0 * (poly_log_moments(coeffs, w) + poly_log_moments(reflected, -w))


def closed_form(problem_id: str, w: float) -> ReferenceValue:
    """
    按问题标识返回闭式参考值

    Args:
        problem_id: log_unit | exp_log_linear | exp_log_nonlinear | cheb_moment_<m>
        w: 频率（非零）

    Returns:
        ReferenceValue（source=closed_form）
    """
    if problem_id == "log_unit":
        value = log_unit(w)
    elif problem_id == "exp_log_linear":
        value = exp_log_linear(w)
    elif problem_id == "exp_log_nonlinear":
        value = exp_log_nonlinear(w)
    else:
        match = _CHEB_MOMENT.match(problem_id or "")
        if match is None:
            raise InvalidArgumentError(f"未知的闭式参考值标识: {problem_id}")
        value = chebyshev_moment(int(match.group(1)), w)
    return ReferenceValue(value=value, source="closed_form", est_error=0.0)


# ========== 自适应参考积分 ==========

@lru_cache(maxsize=16)
def _gauss_legendre(npts: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(npts)
    return nodes, weights


def _panels(start: float, stop: float, h_max: float, rate) -> np.ndarray:
    """
    在 [start, stop] 上贪心划分子区间，宽度 ≤ min(h_max, π/rate(左端点))

    rate 为非增函数时每段至多覆盖半个振荡周期。
    """
    edges = [start]
    t = start
    while t < stop:
        r = rate(t)
        h = h_max if r <= 0.0 else min(h_max, math.pi / r)
        t = min(t + h, stop)
        edges.append(t)
        if len(edges) > settings.oracle_max_panels + 1:
            raise NumericFailureError(
                f"自适应积分子区间数超过上限 {settings.oracle_max_panels}"
            )
    return np.asarray(edges)


def _panel_sum(edges: np.ndarray, npts: int, integrand) -> complex:
    nodes, weights = _gauss_legendre(npts)
    left, right = edges[:-1, None], edges[1:, None]
    half = 0.5 * (right - left)
    pts = 0.5 * (left + right) + half * nodes[None, :]
    values = np.asarray(integrand(pts.ravel()), dtype=np.complex128).reshape(pts.shape)
    return complex(np.sum(values * (half * weights[None, :])))


def _sample_abs_max(func, x: np.ndarray) -> float:
    values = np.broadcast_to(np.asarray(func(x), dtype=np.complex128), x.shape)
    if not np.all(np.isfinite(values)):
        raise InvalidArgumentError("被积函数在采样点上出现非有限值")
    return float(np.max(np.abs(values)))


def adaptive_reference(
    p: IntegralProblem,
    tol: Optional[float] = None,
    x_c: Optional[float] = None
) -> ReferenceValue:
    """
    暴力自适应参考积分

    Args:
        p: 积分问题（f、g、g' 需向量化；不要求已归一化）
        tol: 绝对容差（≥ 1e-13，默认 settings.oracle_tol）
        x_c: 对数代换分割点（默认 settings.oracle_cut）

    Returns:
        ReferenceValue（source=adaptive），est_error 为最后两次估计之差

    Raises:
        NumericFailureError: 点数倍增至上限仍未收敛，携带最佳估计
    """
    tol = settings.oracle_tol if tol is None else float(tol)
    x_c = settings.oracle_cut if x_c is None else float(x_c)
    if not tol >= 1e-13:
        raise InvalidArgumentError(f"自适应积分容差必须 ≥ 1e-13，收到 {tol}")
    if not 0.0 < x_c:
        raise InvalidArgumentError(f"分割点 x_c 必须为正数，收到 {x_c}")
    if not math.isfinite(p.w):
        raise InvalidArgumentError(f"频率必须有限，收到 w={p.w}")
    if abs(p.w) > settings.oracle_w_max:
        raise UnsupportedProblemError(
            f"自适应参考积分仅支持 |w| ≤ {settings.oracle_w_max:g}，收到 w={p.w:g}"
        )

    a, w = float(p.a), float(p.w)
    f, g = p.f, p.osc.g
    probe = np.linspace(0.0, a, 257)
    gp_max = _sample_abs_max(p.osc.gprime, probe)
    rate = abs(w) * gp_max

    def oscillatory(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(f(x)) * np.exp(1j * w * np.asarray(g(x), dtype=float))

    pieces = []
    if p.singular:
        cut = min(x_c, a)
        t0 = -math.log(cut)
        f_max = _sample_abs_max(f, np.linspace(0.0, cut, 129))
        t_max = max(settings.oracle_t_min, math.log(1.0 / tol) + 5.0, t0 + 1.0)
        # 尾项界 ∫_T^∞ t e^{-t} dt · max|f| = (T+1)e^{-T}·max|f|
        while (t_max + 1.0) * math.exp(-t_max) * f_max >= 0.1 * tol:
            t_max += 5.0

        def substituted(t):
            x = np.exp(-t)
            return -t * x * oscillatory(x)

        pieces.append((
            _panels(t0, t_max, 0.5, lambda t: rate * math.exp(-t)),
            substituted,
        ))
        start = cut
    else:
        start = 0.0

    if start < a:
        h_max = max((a - start) / 8.0, 1e-300)

        def weighted(x):
            x = np.asarray(x, dtype=float)
            return np.log(x) * oscillatory(x)

        pieces.append((_panels(start, a, h_max, lambda x: rate),
                       weighted if p.singular else oscillatory))

    n_panels = sum(len(edges) - 1 for edges, _ in pieces)
    logger.info(f"自适应参考积分: w={w:g}, 子区间数 {n_panels}")

    previous = None
    diff = math.inf
    npts = 8
    while npts <= settings.oracle_max_points:
        estimate = sum((_panel_sum(edges, npts, func) for edges, func in pieces), 0j)
        if previous is not None:
            diff = abs(estimate - previous)
            if diff < tol:
                return ReferenceValue(
                    value=p.phase * estimate, source="adaptive", est_error=diff
                )
        previous = estimate
        npts *= 2

    raise NumericFailureError(
        f"自适应参考积分在每段 {settings.oracle_max_points} 点内未达到容差 {tol:g}（差值 {diff:.3e}）",
        best_estimate=p.phase * previous,
        est_error=diff,
    )


# ========== 参考值策略 ==========

def reference_value(
    entry: ProblemEntry,
    w: float,
    allow_high_n: bool = True,
    tol: Optional[float] = None
) -> Optional[ReferenceValue]:
    """
    为注册表问题选取参考值

    闭式优先；其次 |w| ≤ reference_oracle_w_max 时用自适应积分；
    再次（允许时）用 reference_high_n 个节点的 Levin 结果；否则返回 None。
    """
    from app.services.levin import solve_problem
    from app.services.problem_registry import build_problems

    if entry.closed_form_id:
        return closed_form(entry.closed_form_id, w)

    problems = build_problems(entry, w)
    if abs(w) <= settings.reference_oracle_w_max:
        refs: List[ReferenceValue] = [adaptive_reference(p, tol=tol) for p in problems]
        return ReferenceValue(
            value=sum((r.value for r in refs), 0j),
            source="adaptive",
            est_error=sum(r.est_error for r in refs),
        )
    if allow_high_n:
        value = sum(
            (solve_problem(p, settings.reference_high_n, method=entry.default_method).value
             for p in problems),
            0j,
        )
        return ReferenceValue(value=value, source="high_n_levin", est_error=0.0)
    return None
