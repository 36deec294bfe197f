"""
默认搜索区域 (w = ns 平面, 使用时除以 n)

每个函数先扫主区域, 目标值不在其中时再扫一个后备区域;
后备区域的底边经过一个零点或极点, 使 |F| 取遍 (0, +∞) 的绝大部分。
"""
from typing import List

from apps.specfun.elliptic import quarter_periods
from apps.specfun.types import FunctionKind, FunctionTag

from .types import Region


def _w_regions(tag: FunctionTag) -> List[Region]:
    if tag.kind is FunctionKind.ZETA:
        # 后备: 实轴上 ζ(−2) = 0 到极点 s = 1
        return [Region(1.5, 6.0, 0.0, 4.0), Region(-1.9, 1.45, 0.0, 4.0)]
    if tag.kind is FunctionKind.GAMMA:
        return [Region(0.2, 6.0, 0.0, 4.0), Region(0.2, 6.0, 0.0, 8.0)]
    if tag.kind is FunctionKind.JACOBI_CN:
        K, K_prime = quarter_periods(tag.k_sq)  # type: ignore[arg-type]
        return [Region(0.0, 4.0 * K, 0.0, 2.0 * K_prime)]
    return [Region(0.1, 10.0, 0.0, 2.0), Region(0.1, 10.0, 0.0, 6.0)]


def default_regions(tag: FunctionTag, n: int) -> List[Region]:
    """s 平面中的默认区域, 按扫描顺序"""
    return [region.scaled(1.0 / n) for region in _w_regions(tag)]
