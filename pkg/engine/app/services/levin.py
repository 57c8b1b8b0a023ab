"""
Levin 求积引擎

- 经典 Levin 配置法（Lobatto 或 Radau 网格）
- 对数奇异振荡积分：线性振子与一般振子两种奇异性分离算法
- 振子归一化与可移奇点取值

奇异性分离：p = q·log x + h，q、h 分别满足非奇异的 Levin ODE，
其中 h 的振荡部分 h₂ 由 Γ(0,z) 闭式给出。
"""
import logging
from typing import Callable, List, Literal, Optional

import numpy as np

from app.config import settings
from app.core.chebyshev import (
    barycentric_eval,
    lagrange_diff_matrix,
    lobatto_grid,
    map_grid,
    radau_grid,
)
from app.core.exceptions import (
    DomainError,
    FrequencyTooLowError,
    InvalidArgumentError,
    UnsupportedProblemError,
)
from app.core.linalg import TruncatedSvdSolver
from app.core.special import ein
from app.schemas.quadrature import IntegralProblem, Oscillator, QuadratureResult

logger = logging.getLogger(__name__)

RemovableKind = Literal["q2_linear", "q2_general", "f1_general"]
GridKind = Literal["lobatto", "radau"]


# ========== 采样工具 ==========

def _sample(func: Callable, x: np.ndarray, name: str = "f") -> np.ndarray:
    """在节点上对向量化函数采样，返回 complex128 数组（常数函数自动广播）"""
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.asarray(func(x), dtype=np.complex128)
    values = np.broadcast_to(values, np.shape(x)).copy()
    if not np.all(np.isfinite(values)):
        raise InvalidArgumentError(f"{name} 在采样点上出现非有限值")
    return values


def _sample_real(func: Callable, x: np.ndarray, name: str) -> np.ndarray:
    values = _sample(func, x, name)
    if np.any(values.imag != 0.0):
        raise InvalidArgumentError(f"{name} 必须为实值函数")
    return values.real.copy()


def _scalar(func: Callable, x: float, name: str) -> complex:
    return complex(_sample(func, np.array([float(x)]), name)[0])


def _check_order(n: int, minimum: int) -> int:
    if int(n) != n or n < minimum:
        raise InvalidArgumentError(f"节点数 n 必须为 ≥ {minimum} 的整数，收到 n={n}")
    return int(n)


def _check_frequency(w: float) -> None:
    if not np.isfinite(w):
        raise InvalidArgumentError(f"频率必须有限，收到 w={w}")
    if abs(w) < settings.w_min:
        raise FrequencyTooLowError(
            f"|w|={abs(w):g} 低于 Levin 路径下限 w_min={settings.w_min:g}，请改用 oracle"
        )


# ========== 归一化 ==========

def normalize_problem(p: IntegralProblem) -> IntegralProblem:
    """
    振子归一化：使 g(0)=0 且 g' > 0

    - g(0)=c≠0：g ← g - c，相位因子乘以 e^{iwc}
    - g' < 0：g ← -g，w ← -w（积分值不变）
    - 仿射振子 g = s·x + c：g ← x，w ← s·w

    最终积分 = phase · （归一化问题的求积值）。

    Raises:
        UnsupportedProblemError: g' 在检查网格上变号或为零（驻点）
    """
    if p.normalized:
        return p

    grid = map_grid(lobatto_grid(settings.normalization_check_points), p.a)
    gp = _sample_real(p.osc.gprime, grid.mapped, "g'")
    if np.any(gp == 0.0) or (np.any(gp > 0.0) and np.any(gp < 0.0)):
        raise UnsupportedProblemError(
            f"振子 {p.osc.descriptor} 的导数在 [0,{p.a:g}] 上变号或为零（存在驻点）"
        )

    offset = _scalar(p.osc.g, 0.0, "g").real
    phase = p.phase
    w = p.w
    flip = p.fliplabel

    if offset != 0.0:
        phase = phase * np.exp(1j * w * offset)

    if p.osc.affine_slope is not None:
        slope = float(p.osc.affine_slope)
        osc = Oscillator.linear()
        w = w * slope
        flip = flip ^ (slope < 0.0)
    else:
        g0, gp0 = p.osc.g, p.osc.gprime
        sign = 1.0 if gp[0] > 0.0 else -1.0
        if sign < 0.0:
            w = -w
            flip = not flip
        osc = Oscillator(
            g=lambda x, g0=g0, c=offset, s=sign: s * (np.asarray(g0(x), dtype=float) - c),
            gprime=lambda x, gp0=gp0, s=sign: s * np.asarray(gp0(x), dtype=float),
            descriptor=p.osc.descriptor if (offset == 0.0 and sign > 0.0) else f"normalized({p.osc.descriptor})",
        )

    if offset != 0.0 or flip != p.fliplabel:
        logger.info(
            f"振子归一化: {p.osc.descriptor} → g(0)=0, w={p.w:g}→{w:g}, 相位={complex(phase):.6g}"
        )

    return p.model_copy(update={
        "osc": osc, "w": float(w), "phase": complex(phase),
        "fliplabel": bool(flip), "normalized": True,
    })


# ========== 可移奇点 ==========

def removable_values(
    kind: RemovableKind,
    f: Callable,
    osc: Oscillator,
    w: float,
    q1_at_0: complex,
    x,
    q1_at_x=None
):
    """
    可移奇点函数取值：x > 0 用商形式，x = 0 用极限

    - q2_linear: (q₁(x)-q₁(0))/x；x=0 时 f(0) - iw·g'(0)·q₁(0)
    - q2_general: (q₁(x)-q₁(0))/g(x)；x=0 时 (f(0) - iw·g'(0)·q₁(0))/g'(0)
    - f1_general: f(x)·log(x/g(x))；x=0 时 f(0)·log(1/g'(0))

    Args:
        kind: 函数种类
        f: 振幅函数
        osc: （已归一化的）振子
        w: 频率
        q1_at_0: q₁(0)
        x: 求值点（标量或数组，≥ 0）
        q1_at_x: q₁ 在 x 处的值（q2_* 需要）

    Returns:
        与 x 同形的复数值
    """
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0.0):
        raise DomainError("可移奇点函数只在 x ≥ 0 上定义")
    out = np.empty(xs.shape, dtype=np.complex128)
    zero = xs == 0.0
    pos = ~zero

    if kind not in ("q2_linear", "q2_general", "f1_general"):
        raise InvalidArgumentError(f"未知的可移奇点类型: {kind}")

    if kind == "q2_linear":
        if np.any(pos):
            q1x = np.atleast_1d(np.asarray(q1_at_x, dtype=np.complex128))
            out[pos] = (q1x[pos] - q1_at_0) / xs[pos]
        if np.any(zero):
            gp0 = _scalar(osc.gprime, 0.0, "g'").real
            out[zero] = _scalar(f, 0.0, "f") - 1j * w * gp0 * q1_at_0
    else:
        if np.any(pos):
            gx = _sample_real(osc.g, xs[pos], "g")
            if np.any(gx == 0.0):
                raise DomainError(f"振子 {osc.descriptor} 在 x > 0 处取零，违反 g 自 0 递增的前提")
        if kind == "q2_general":
            if np.any(pos):
                q1x = np.atleast_1d(np.asarray(q1_at_x, dtype=np.complex128))
                out[pos] = (q1x[pos] - q1_at_0) / gx
            if np.any(zero):
                gp0 = _scalar(osc.gprime, 0.0, "g'").real
                out[zero] = (_scalar(f, 0.0, "f") - 1j * w * gp0 * q1_at_0) / gp0
        else:
            if np.any(pos):
                out[pos] = _sample(f, xs[pos], "f") * np.log(xs[pos] / gx)
            if np.any(zero):
                gp0 = _scalar(osc.gprime, 0.0, "g'").real
                out[zero] = _scalar(f, 0.0, "f") * np.log(1.0 / gp0)

    return out[0] if scalar else out


def h2_endpoint(q1_at_0: complex, w: float, gval: float) -> complex:
    """
    h₂ 在 g(x)=gval 处的闭式值

    h₂ = q₁(0)·e^{-iw·gval}·(γ + Γ(0,-iw·gval) + Log(-iw·gval))，
    括号内组合即 Ein(-iw·gval)。h₂(0)=0 由调用方直接处理。
    """
    if not np.isfinite(gval) or gval <= 0.0:
        raise DomainError(f"h₂ 闭式要求 g > 0，收到 {gval}")
    if w == 0.0:
        raise InvalidArgumentError("h₂ 闭式要求 w ≠ 0")
    if q1_at_0 == 0:
        return 0j
    z = complex(0.0, -w * gval)
    return complex(q1_at_0) * np.exp(z) * ein(z)


# ========== 求积算法 ==========

def levin_classic(
    f: Callable,
    osc: Oscillator,
    a: float,
    w: float,
    n: int,
    grid_kind: GridKind = "lobatto",
    rel_tol: Optional[float] = None
) -> QuadratureResult:
    """
    经典 Levin 配置法：∫_0^a f(x) e^{iwg(x)} dx ≈ p(a)e^{iwg(a)} - p(0)e^{iwg(0)}

    Radau 网格不含 0，p(0) 由配置多项式的重心插值得到。
    """
    n = _check_order(n, 2)
    if grid_kind == "lobatto":
        grid = map_grid(lobatto_grid(n), a)
        x = grid.mapped
        diff = grid.scaled_diff
    elif grid_kind == "radau":
        if not np.isfinite(a) or a <= 0:
            raise InvalidArgumentError(f"区间长度 a 必须为正数，收到 a={a}")
        x = float(a) * radau_grid(n)
        diff = lagrange_diff_matrix(x)
    else:
        raise InvalidArgumentError(f"未知网格类型: {grid_kind}")

    fx = _sample(f, x, "f")
    gpx = _sample_real(osc.gprime, x, "g'")
    solver = TruncatedSvdSolver(diff + 1j * w * np.diag(gpx), rel_tol=rel_tol)
    report = solver.solve(fx)
    p = report.solution

    if grid_kind == "lobatto":
        p_left, p_right = p[0], p[-1]
    else:
        p_left, p_right = barycentric_eval(x, p, 0.0), p[0]

    g_left = _scalar(osc.g, 0.0, "g").real
    g_right = _scalar(osc.g, a, "g").real
    value = p_right * np.exp(1j * w * g_right) - p_left * np.exp(1j * w * g_left)

    return QuadratureResult(
        value=complex(value), n=n, rank_used=report.rank_used,
        residual_inf=report.residual_inf, method="classic",
    )


def levin_log_linear(
    f: Callable,
    a: float,
    w: float,
    n: int,
    rel_tol: Optional[float] = None
) -> QuadratureResult:
    """
    线性振子 g(x)=x 的对数奇异积分 ∫_0^a f(x) log x e^{iwx} dx

    两次 TSVD 求解共用 L = (2/a)D + iwI 的一次分解：
    q₁ = L⁻¹f，h₁ = L⁻¹(-q₂)，再由闭式给出 h₂(a)。
    """
    n = _check_order(n, 3)
    _check_frequency(w)
    grid = map_grid(lobatto_grid(n), a)
    x = grid.mapped
    a = grid.a

    solver = TruncatedSvdSolver(grid.scaled_diff + 1j * w * np.eye(n), rel_tol=rel_tol)
    fx = _sample(f, x, "f")

    rep_q1 = solver.solve(fx)
    q1 = rep_q1.solution
    q2 = removable_values("q2_linear", f, Oscillator.linear(), w, q1[0], x, q1)
    # 𝓛h₁ = -q₂
    rep_h1 = solver.solve(-q2)
    h1 = rep_h1.solution
    h2a = h2_endpoint(q1[0], w, a)

    e = np.exp(1j * w * a)
    comb = q1 * np.log(a) + h1
    value = e * comb[-1] - comb[0] + e * h2a

    return QuadratureResult(
        value=complex(value), n=n, rank_used=solver.rank,
        residual_inf=max(rep_q1.residual_inf, rep_h1.residual_inf),
        method="log_linear",
    )


def levin_log_general(
    f: Callable,
    osc: Oscillator,
    a: float,
    w: float,
    n: int,
    rel_tol: Optional[float] = None
) -> QuadratureResult:
    """
    一般振子的对数奇异积分 ∫_0^a f(x) log x e^{iwg(x)} dx

    拆分 log x = log(x/g(x)) + log g(x)：前者为光滑振幅 f₁，用经典 Levin；
    后者按奇异性分离处理。三次求解共用 L = (2/a)D + iw·diag(g') 的一次分解。
    """
    n = _check_order(n, 3)
    _check_frequency(w)
    grid = map_grid(lobatto_grid(n), a)
    x = grid.mapped
    a = grid.a

    ga = _scalar(osc.g, a, "g").real
    if ga <= 0.0:
        raise UnsupportedProblemError(f"一般振子算法要求 g(a) > 0，收到 g({a:g})={ga:g}")

    gpx = _sample_real(osc.gprime, x, "g'")
    solver = TruncatedSvdSolver(grid.scaled_diff + 1j * w * np.diag(gpx), rel_tol=rel_tol)

    fx = _sample(f, x, "f")
    f1 = removable_values("f1_general", f, osc, w, 0j, x)
    rep_q = solver.solve(f1)
    rep_q1 = solver.solve(fx)
    q1 = rep_q1.solution
    q2 = removable_values("q2_general", f, osc, w, q1[0], x, q1)
    # 𝓛h₁ = -g'·q₂
    rep_h1 = solver.solve(-gpx * q2)
    h2a = h2_endpoint(q1[0], w, ga)

    e = np.exp(1j * w * ga)
    comb = rep_q.solution + q1 * np.log(ga) + rep_h1.solution
    value = e * comb[-1] - comb[0] + e * h2a

    return QuadratureResult(
        value=complex(value), n=n, rank_used=solver.rank,
        residual_inf=max(rep_q.residual_inf, rep_q1.residual_inf, rep_h1.residual_inf),
        method="log_general",
    )


# ========== 问题级入口 ==========

def solve_problem(
    problem: IntegralProblem,
    n: int,
    method: str = "auto",
    grid_kind: GridKind = "lobatto",
    rel_tol: Optional[float] = None
) -> QuadratureResult:
    """
    归一化后按问题类型分派求积方法，返回值含归一化相位

    Args:
        problem: 积分问题
        n: 节点数
        method: auto | classic | log_linear | log_general
        grid_kind: 网格类型（radau 仅用于 classic）
        rel_tol: TSVD 相对阈值

    Returns:
        QuadratureResult
    """
    p = normalize_problem(problem)

    if method == "auto":
        if not p.singular:
            method = "classic"
        elif p.osc.is_identity:
            method = "log_linear"
        else:
            method = "log_general"

    if grid_kind != "lobatto" and method != "classic":
        raise InvalidArgumentError(f"{grid_kind} 网格仅适用于经典 Levin 方法")

    if method == "classic":
        if p.singular:
            if grid_kind == "lobatto":
                # Lobatto 网格含 x=0，f·log x 在该点无定义
                raise UnsupportedProblemError(
                    "经典 Levin 求含 log x 权的问题需使用不含 x=0 的网格（--grid radau）"
                )
            f0 = p.f

            def amplitude(x, f0=f0):
                with np.errstate(divide="ignore"):
                    return np.asarray(f0(x)) * np.log(x)
        else:
            amplitude = p.f
        result = levin_classic(amplitude, p.osc, p.a, p.w, n, grid_kind, rel_tol)
    elif method in ("log_linear", "log_general"):
        if not p.singular:
            raise UnsupportedProblemError(f"{method} 只适用于含 log x 权的问题")
        if method == "log_linear":
            if not p.osc.is_identity:
                raise UnsupportedProblemError(
                    f"log_linear 要求线性振子，当前振子为 {p.osc.descriptor}"
                )
            result = levin_log_linear(p.f, p.a, p.w, n, rel_tol)
        else:
            result = levin_log_general(p.f, p.osc, p.a, p.w, n, rel_tol)
    else:
        raise InvalidArgumentError(f"未知的求积方法: {method}")

    return result.model_copy(update={"value": p.phase * result.value})


def combine_results(results: List[QuadratureResult]) -> QuadratureResult:
    """多个分片结果求和；秩取最小，残差取最大"""
    if not results:
        raise InvalidArgumentError("没有可合并的求积结果")
    return QuadratureResult(
        value=sum((r.value for r in results), 0j),
        n=results[0].n,
        rank_used=min(r.rank_used for r in results),
        residual_inf=max(r.residual_inf for r in results),
        method=results[0].method,
    )


def levin_log_symmetric(
    f: Callable,
    w: float,
    n: int,
    rel_tol: Optional[float] = None
) -> QuadratureResult:
    """
    ∫_{-1}^{1} f(x) log(x²) e^{iwx} dx = Q[2f(x), w] + Q[2f(-x), -w]（[0,1] 上的线性振子）
    """
    right = levin_log_linear(lambda x: 2.0 * np.asarray(f(x)), 1.0, w, n, rel_tol)
    left = levin_log_linear(lambda x: 2.0 * np.asarray(f(-np.asarray(x))), 1.0, -w, n, rel_tol)
    return combine_results([right, left])


def levin_log_interval(
    f: Callable,
    g: Callable,
    gprime: Callable,
    lo: float,
    hi: float,
    s: float,
    w: float,
    n: int,
    method: str = "auto",
    rel_tol: Optional[float] = None,
    affine_slope: Optional[float] = None
) -> QuadratureResult:
    """
    ∫_lo^hi f(x) log|x-s| e^{iwg(x)} dx，奇点 s ∈ [lo, hi]

    在 s 处拆分：右段 x = s+t，左段 x = s-t（反射后 g' 变号，由归一化翻转 w），
    两段均化为 [0, ·] 上的标准问题，空段跳过。
    affine_slope 非空时 g 视为斜率为该值的仿射函数。
    """
    if not (lo <= s <= hi) or lo == hi:
        raise InvalidArgumentError(f"要求 lo ≤ s ≤ hi 且 lo < hi，收到 [{lo}, {hi}], s={s}")

    results = []
    if hi > s:
        right = IntegralProblem(
            f=lambda t: f(s + np.asarray(t)),
            osc=Oscillator(
                g=lambda t: g(s + np.asarray(t)),
                gprime=lambda t: gprime(s + np.asarray(t)),
                descriptor="g(s+t)",
                affine_slope=affine_slope,
            ),
            a=hi - s, w=w, singular=True,
        )
        results.append(solve_problem(right, n, method=method, rel_tol=rel_tol))
    if s > lo:
        left = IntegralProblem(
            f=lambda t: f(s - np.asarray(t)),
            osc=Oscillator(
                g=lambda t: g(s - np.asarray(t)),
                gprime=lambda t: -np.asarray(gprime(s - np.asarray(t))),
                descriptor="g(s-t)",
                affine_slope=None if affine_slope is None else -affine_slope,
            ),
            a=s - lo, w=w, singular=True,
        )
        results.append(solve_problem(left, n, method=method, rel_tol=rel_tol))
    return combine_results(results)
