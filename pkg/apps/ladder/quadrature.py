"""
求积工具

* ``panel_rule``: 在 2^depth 个等分子区间上做固定阶 Gauss–Legendre, 对一批区间向量化;
* ``adaptive_panels``: 逐面板加深 depth 直到相邻两级之差 ≤ tol·长度;
* ``integrate``: scipy.integrate.quad 的封装, 达不到容差时抛 QuadratureError。
"""
import logging
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate as sp_integrate

from apps.core.exceptions import QuadratureError

logger = logging.getLogger(__name__)

GL_NODES = 20
MAX_DEPTH = 8

VectorFunction = Callable[[np.ndarray], np.ndarray]


@lru_cache(maxsize=None)
def _reference_rule(depth: int) -> Tuple[np.ndarray, np.ndarray]:
    """[0, 1] 上 2^depth 等分的复合 Gauss–Legendre 节点与权重"""
    x, w = leggauss(GL_NODES)
    parts = 2**depth
    offsets = np.arange(parts, dtype=float)[:, None]
    nodes = ((offsets + (x[None, :] + 1.0) / 2.0) / parts).ravel()
    weights = np.tile(w / (2.0 * parts), parts)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_nodes(a: np.ndarray, b: np.ndarray, depth: int) -> np.ndarray:
    """每个区间一行节点"""
    nodes, _ = _reference_rule(depth)
    a = np.asarray(a, dtype=float)
    return a[:, None] + (np.asarray(b, dtype=float) - a)[:, None] * nodes[None, :]


def panel_rule(f: VectorFunction, a: np.ndarray, b: np.ndarray, depth: int) -> np.ndarray:
    """∫_a^b f, 对每对 (a, b) 独立求值"""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if a.size == 0:
        return np.zeros(0)
    _, weights = _reference_rule(depth)
    nodes = panel_nodes(a, b, depth)
    values = f(nodes.ravel()).reshape(nodes.shape)
    return (b - a) * (values @ weights)


def adaptive_panels(
    f: VectorFunction,
    a: np.ndarray,
    b: np.ndarray,
    tol: float,
    min_depth: Optional[np.ndarray] = None,
    max_depth: int = MAX_DEPTH,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    面板自适应积分
    :return: (积分值, 采用的 depth); 采用的是更细一级的值
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    floor = np.ones(a.size, dtype=int) if min_depth is None else np.asarray(min_depth, dtype=int)
    values = np.full(a.size, np.nan)
    depths = np.full(a.size, -1, dtype=int)
    coarse = panel_rule(f, a, b, 0)
    pending = np.arange(a.size)
    for depth in range(1, max_depth + 1):
        fine = panel_rule(f, a[pending], b[pending], depth)
        lengths = b[pending] - a[pending]
        done = (np.abs(fine - coarse) <= tol * lengths) & (floor[pending] <= depth)
        values[pending[done]] = fine[done]
        depths[pending[done]] = depth
        pending, coarse = pending[~done], fine[~done]
        if pending.size == 0:
            return values, depths
    raise QuadratureError(
        "panel quadrature did not converge",
        data={"panels": int(pending.size), "first_a": float(a[pending[0]]), "max_depth": max_depth, "tol": tol},
    )


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    points: Optional[np.ndarray] = None,
    limit: int = 200,
) -> float:
    """scipy quad, 绝对误差估计超过 tol·max(1, |I|) 时抛错"""
    kwargs = {"limit": limit, "epsabs": tol * 1e-2, "epsrel": 1e-13}
    if points is not None and len(points):
        kwargs["points"] = points
    value, abserr, info = sp_integrate.quad(f, a, b, full_output=1, **kwargs)[:3]
    if not np.isfinite(value) or abserr > tol * max(1.0, abs(value)):
        raise QuadratureError(
            "quadrature tolerance unreachable",
            data={"a": a, "b": b, "value": value, "abserr": abserr, "tol": tol, "evaluations": info.get("neval")},
        )
    logger.debug("quad finished", extra={"data": {"a": a, "b": b, "abserr": abserr, "neval": info.get("neval")}})
    return float(value)
