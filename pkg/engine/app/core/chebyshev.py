"""
Chebyshev 网格与谱微分矩阵

- Chebyshev–Lobatto 点（升序）及一阶谱微分矩阵
- 经典 Levin 对照实验用的修正 Chebyshev–Gauss–Radau 点
- 任意节点上的重心插值与 Lagrange 微分矩阵
"""
from typing import Union

import numpy as np

from app.core.exceptions import InvalidArgumentError
from app.schemas.grid import ChebyshevGrid, MappedGrid


def lobatto_grid(n: int) -> ChebyshevGrid:
    """
    构造 n 个 Chebyshev–Lobatto 点及微分矩阵

    节点 x_j = -cos(jπ/(n-1)) 升序排列，首节点 -1、末节点 1。
    对角元用负和技巧（每行对角元 = -非对角元之和）。

    Args:
        n: 节点数（n ≥ 2）

    Returns:
        ChebyshevGrid
    """
    if int(n) != n or n < 2:
        raise InvalidArgumentError(f"Lobatto 网格节点数必须 ≥ 2，收到 n={n}")
    n = int(n)
    N = n - 1
    j = np.arange(n)

    # sin 形式保证节点关于 0 严格对称
    nodes = np.sin(np.pi * (2 * j - N) / (2 * N))
    nodes[0] = -1.0
    nodes[-1] = 1.0

    c = np.ones(n)
    c[0] = c[-1] = 2.0
    c = c * (-1.0) ** j

    dx = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(dx, 1.0)
    diff = np.outer(c, 1.0 / c) / dx
    np.fill_diagonal(diff, 0.0)
    np.fill_diagonal(diff, -diff.sum(axis=1))

    return ChebyshevGrid(n=n, nodes=nodes, diff=diff)


def radau_grid(n: int) -> np.ndarray:
    """
    修正 Chebyshev–Gauss–Radau 点 t_j = (1+cos(2πj/(2n-1)))/2

    t_0 = 1，随 j 严格递减，全部位于 (0,1]（不含奇点 0）。
    """
    if int(n) != n or n < 2:
        raise InvalidArgumentError(f"Radau 网格节点数必须 ≥ 2，收到 n={n}")
    n = int(n)
    j = np.arange(n)
    t = 0.5 * (1.0 + np.cos(2.0 * np.pi * j / (2 * n - 1)))
    t[0] = 1.0
    t.flags.writeable = False
    return t


def map_grid(grid: ChebyshevGrid, a: float) -> MappedGrid:
    """
    仿射映射 φ(x) = (a/2)x + a/2 到 [0,a]

    端点直接赋值为 0 与 a，可移奇点的极限公式依赖与 0 的精确比较。
    """
    if not np.isfinite(a) or a <= 0:
        raise InvalidArgumentError(f"区间长度 a 必须为正数，收到 a={a}")
    a = float(a)
    mapped = 0.5 * a * grid.nodes + 0.5 * a
    mapped[0] = 0.0
    mapped[-1] = a
    return MappedGrid(base=grid, a=a, mapped=mapped)


def barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    """
    重心权 w_j = 1/∏_{k≠j}(x_j - x_k)

    差值先乘以区间容量因子 4/(max-min)，避免 n 较大时上溢或下溢；
    插值与微分只用到权的比值。
    """
    x = np.asarray(nodes, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise InvalidArgumentError("重心权至少需要 2 个节点")
    span = x.max() - x.min()
    dx = (x[:, None] - x[None, :]) * (4.0 / span)
    np.fill_diagonal(dx, 1.0)
    if np.any(dx == 0.0):
        raise InvalidArgumentError("节点存在重复")
    return 1.0 / np.prod(dx, axis=1)


def lagrange_diff_matrix(nodes: np.ndarray) -> np.ndarray:
    """
    任意互异节点上的 Lagrange 插值微分矩阵

    D_ij = (w_j/w_i)/(x_i - x_j)，i≠j；对角元用负和技巧。
    """
    x = np.asarray(nodes, dtype=float)
    w = barycentric_weights(x)
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    diff = (w[None, :] / w[:, None]) / dx
    np.fill_diagonal(diff, 0.0)
    np.fill_diagonal(diff, -diff.sum(axis=1))
    return diff


def barycentric_eval(
    nodes: np.ndarray,
    values: np.ndarray,
    x: Union[float, np.ndarray]
) -> Union[complex, np.ndarray]:
    """
    第二型重心公式求插值多项式在 x 处的值

    Args:
        nodes: 插值节点
        values: 节点上的（复）函数值
        x: 求值点（标量或数组）

    Returns:
        插值结果，x 为标量时返回标量
    """
    xn = np.asarray(nodes, dtype=float)
    vals = np.asarray(values)
    w = barycentric_weights(xn)
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))

    diff = xs[:, None] - xn[None, :]
    exact = diff == 0.0
    diff[exact] = 1.0
    ratio = w[None, :] / diff
    result = (ratio @ vals) / ratio.sum(axis=1)

    # 恰好落在节点上
    hit_rows, hit_cols = np.nonzero(exact)
    if hit_rows.size:
        result = result.astype(np.result_type(result, vals))
        result[hit_rows] = vals[hit_cols]

    return result[0] if scalar else result
