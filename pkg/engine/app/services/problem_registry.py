"""
内置测试问题注册表

每个问题由 [0,a] 上的若干分片（振幅 f、频率符号）组成，积分为各分片之和；
[-1,1] 上带 log(x²) 权的问题拆成 x 与 -x 两个半区间分片。
"""
import logging
from typing import Dict, List, Optional

import numpy as np
from numpy.polynomial import chebyshev as cheb

from app.core.exceptions import UsageError
from app.schemas.quadrature import IntegralProblem, Oscillator
from app.schemas.records import ProblemEntry, ProblemPiece

logger = logging.getLogger(__name__)


def _const_one(x):
    return np.ones_like(np.asarray(x, dtype=float))


def _exp(x):
    return np.exp(np.asarray(x, dtype=float))


def _exp_quadratic(x):
    x = np.asarray(x, dtype=float)
    return (2.0 * x + 1.0) * np.exp(x * x + x)


def _cos_rational(x):
    x = np.asarray(x, dtype=float)
    return 2.0 * np.cos(4.0 * x) / (x * x + x + 1.0)


def _cheb_piece(m: int, sign: float):
    coeffs = [0.0] * m + [1.0]

    def amplitude(x):
        return 2.0 * cheb.chebval(sign * np.asarray(x, dtype=float), coeffs)

    return amplitude


def _quadratic_oscillator() -> Oscillator:
    return Oscillator(
        g=lambda x: np.asarray(x, dtype=float) ** 2 + np.asarray(x, dtype=float),
        gprime=lambda x: 2.0 * np.asarray(x, dtype=float) + 1.0,
        descriptor="x^2+x",
    )


def _sine_oscillator() -> Oscillator:
    return Oscillator(
        g=lambda x: (2.0 * np.asarray(x, dtype=float) + np.sin(0.5 * np.pi * np.asarray(x, dtype=float))) / 3.0,
        gprime=lambda x: (2.0 + 0.5 * np.pi * np.cos(0.5 * np.pi * np.asarray(x, dtype=float))) / 3.0,
        descriptor="(2x+sin(pi*x/2))/3",
    )


class ProblemRegistry:
    """内置问题注册表（名称唯一）"""

    def __init__(self):
        self._entries: Dict[str, ProblemEntry] = {}
        self._register_defaults()

    def _register_defaults(self) -> None:
        linear = Oscillator.linear()

        self.register(ProblemEntry(
            name="log_unit",
            pieces=[ProblemPiece(f=_const_one)],
            osc=linear,
            closed_form_id="log_unit",
            default_method="log_linear",
            citation="∫_0^1 log x e^{iwx} dx，Si/Ci 闭式",
        ))
        self.register(ProblemEntry(
            name="exp_log_linear",
            pieces=[ProblemPiece(f=_exp)],
            osc=linear,
            closed_form_id="exp_log_linear",
            default_method="log_linear",
            citation="线性振子：∫_0^1 e^x log x e^{iwx} dx",
        ))
        self.register(ProblemEntry(
            name="exp_log_nonlinear",
            pieces=[ProblemPiece(f=_exp_quadratic)],
            osc=_quadratic_oscillator(),
            closed_form_id="exp_log_nonlinear",
            default_method="log_general",
            citation="二次振子：g(x)=x²+x",
        ))
        for m in range(2, 7):
            self.register(ProblemEntry(
                name=f"cheb_moment_{m}",
                pieces=[
                    ProblemPiece(f=_cheb_piece(m, 1.0), w_sign=1),
                    ProblemPiece(f=_cheb_piece(m, -1.0), w_sign=-1),
                ],
                osc=linear,
                closed_form_id=f"cheb_moment_{m}",
                default_method="log_linear",
                citation=f"Chebyshev 矩：∫_-1^1 T_{m}(x) log(x²) e^{{iwx}} dx",
            ))
        self.register(ProblemEntry(
            name="osc_sin",
            pieces=[ProblemPiece(f=_const_one)],
            osc=_sine_oscillator(),
            default_method="log_general",
            citation="正弦扰动振子：g(x)=(2x+sin(πx/2))/3",
        ))
        self.register(ProblemEntry(
            name="cos_rational",
            pieces=[
                ProblemPiece(f=_cos_rational, w_sign=1),
                ProblemPiece(f=lambda x: _cos_rational(-np.asarray(x, dtype=float)), w_sign=-1),
            ],
            osc=linear,
            default_method="log_linear",
            citation="有理振幅：∫_-1^1 cos(4x)/(x²+x+1) log(x²) e^{iwx} dx",
        ))

    def register(self, entry: ProblemEntry) -> None:
        if entry.name in self._entries:
            raise ValueError(f"问题名重复: {entry.name}")
        self._entries[entry.name] = entry

    def get(self, name: str) -> ProblemEntry:
        """按名称查找，未知名称抛出 UsageError"""
        entry = self._entries.get(name)
        if entry is None:
            raise UsageError(f"未知问题: {name}（可选: {', '.join(self.names())}）")
        return entry

    def names(self) -> List[str]:
        return list(self._entries)

    def __contains__(self, name: str) -> bool:
        return name in self._entries


def build_problems(entry: ProblemEntry, w: float) -> List[IntegralProblem]:
    """把注册表条目展开为各分片的 IntegralProblem（频率乘以分片符号）"""
    return [
        IntegralProblem(
            f=piece.f, osc=entry.osc, a=entry.a,
            w=float(w) * piece.w_sign, singular=entry.singular,
        )
        for piece in entry.pieces
    ]


_registry: Optional[ProblemRegistry] = None


def get_problem_registry() -> ProblemRegistry:
    """获取全局注册表实例"""
    global _registry
    if _registry is None:
        _registry = ProblemRegistry()
    return _registry
