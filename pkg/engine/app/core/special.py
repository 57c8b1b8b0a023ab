"""
特殊函数

- 主值复对数 Log z（辐角取 (-π, π]）
- 余不完全 Gamma 函数 Γ(0,z) = E₁(z)：|z| ≤ z_switch 用幂级数，
  否则用改进 Lentz 算法计算连分式
- 整函数 Ein(z) = γ + Γ(0,z) + Log z（小 |z| 时直接求级数，避免 γ 与 Log 相消）
- 正弦积分 Si 与余弦积分 Ci
"""
import cmath
import math
from typing import Tuple

from app.config import settings
from app.core.exceptions import DomainError, InvalidArgumentError, NumericFailureError

EULER_GAMMA = 0.57721566490153286060651209008240243


def euler_gamma() -> float:
    """Euler 常数 γ"""
    return EULER_GAMMA


def _as_complex(z) -> complex:
    zc = complex(z)
    if not (math.isfinite(zc.real) and math.isfinite(zc.imag)):
        raise InvalidArgumentError(f"参数必须为有限复数，收到 {z}")
    return zc


def principal_log(z) -> complex:
    """
    主值对数 Log z = log|z| + i·arg z，arg ∈ (-π, π]

    负实轴（含 -0.0 虚部）统一取 +iπ。
    """
    zc = _as_complex(z)
    if zc == 0:
        raise DomainError("Log(0) 无定义")
    if zc.imag == 0.0 and zc.real < 0.0:
        return complex(math.log(-zc.real), math.pi)
    return cmath.log(zc)


def _ein_series(z: complex) -> complex:
    """Ein(z) = Σ_{j≥1} (-1)^{j+1} z^j / (j·j!)"""
    stop = settings.series_rel_stop
    term = z          # (-1)^{j+1} z^j / j!
    total = term
    for j in range(2, 1000):
        term *= -z / j
        contribution = term / j
        total += contribution
        if abs(contribution) <= stop * abs(total):
            return total
    raise NumericFailureError(f"Ein 级数在 1000 项内未收敛（z={z}）")


def _gamma0_continued_fraction(z: complex) -> complex:
    """
    E₁(z) = e^{-z} · 1/(z+1- 1²/(z+3- 2²/(z+5- ...)))，改进 Lentz 算法
    """
    tiny = settings.cf_tiny
    eps = settings.cf_eps
    b = z + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, settings.cf_max_iter + 1):
        an = -float(i * i)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        d = 1.0 / d
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        delta = c * d
        h *= delta
        if abs(delta - 1.0) <= eps:
            return h * cmath.exp(-z)
    raise NumericFailureError(
        f"Γ(0,z) 连分式在 {settings.cf_max_iter} 次迭代内未收敛（z={z}）"
    )


def gamma0(z) -> complex:
    """
    余不完全 Gamma 函数 Γ(0,z) = ∫_z^∞ e^{-t}/t dt（主值分支）

    Args:
        z: 非零复数，|arg z| < π

    Returns:
        Γ(0,z)
    """
    zc = _as_complex(z)
    if zc == 0:
        raise DomainError("Γ(0,0) 无定义")
    if abs(zc) <= settings.gamma_switch:
        return -EULER_GAMMA - principal_log(zc) + _ein_series(zc)
    return _gamma0_continued_fraction(zc)


def gamma0_series(z) -> complex:
    """Γ(0,z) 的纯幂级数求值（用于与连分式交叉校验）"""
    zc = _as_complex(z)
    if zc == 0:
        raise DomainError("Γ(0,0) 无定义")
    return -EULER_GAMMA - principal_log(zc) + _ein_series(zc)


def gamma0_continued_fraction(z) -> complex:
    """Γ(0,z) 的纯连分式求值（用于与级数交叉校验）"""
    zc = _as_complex(z)
    if zc == 0:
        raise DomainError("Γ(0,0) 无定义")
    return _gamma0_continued_fraction(zc)


def ein(z) -> complex:
    """
    Ein(z) = ∫_0^z (1-e^{-t})/t dt = γ + Γ(0,z) + Log z

    Ein(0) = 0。
    """
    zc = _as_complex(z)
    if zc == 0:
        return 0j
    if abs(zc) <= settings.gamma_switch:
        return _ein_series(zc)
    return EULER_GAMMA + _gamma0_continued_fraction(zc) + principal_log(zc)


def sici(x: float) -> Tuple[float, float]:
    """
    正弦积分与余弦积分 (Si(x), Ci(x))，x > 0

    x ≤ z_switch 时用幂级数；否则由 E₁(ix) = -Ci(x) + i(Si(x) - π/2)
    经连分式得到。
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"sici 要求 x > 0，收到 x={x}")

    if x > settings.gamma_switch:
        e1 = _gamma0_continued_fraction(complex(0.0, x))
        return 0.5 * math.pi + e1.imag, -e1.real

    stop = settings.series_rel_stop
    x2 = x * x
    # Si = Σ (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
    term = x
    si = x
    # Ci = γ + log x + Σ_{k≥1} (-1)^k x^{2k} / (2k (2k)!)
    cterm = 1.0
    ci_sum = 0.0
    for k in range(1, 200):
        term *= -x2 / ((2 * k) * (2 * k + 1))
        si_part = term / (2 * k + 1)
        si += si_part
        cterm *= -x2 / ((2 * k - 1) * (2 * k))
        ci_part = cterm / (2 * k)
        ci_sum += ci_part
        if abs(si_part) <= stop * abs(si) and abs(ci_part) <= stop * max(abs(ci_sum), 1e-300):
            break
    return si, EULER_GAMMA + math.log(x) + ci_sum
