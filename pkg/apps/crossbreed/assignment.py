"""
行 → 函数的循环分配

q = 1: (ζ, Γ, cn, J_p)
q = 2: (Γ, cn, J_p, ζ)
q = 3: (cn, J_p, ζ, Γ)
q = 4: (J_p, ζ, Γ, cn)
"""
from typing import Tuple

from apps.core.exceptions import DomainError
from apps.specfun.types import FunctionKind, FunctionTag

BASE_ORDER: Tuple[FunctionKind, ...] = (
    FunctionKind.ZETA,
    FunctionKind.GAMMA,
    FunctionKind.JACOBI_CN,
    FunctionKind.BESSEL_J,
)


def residue(row: int) -> int:
    """q = ((row − 1) mod 4) + 1"""
    if int(row) != row or row < 1:
        raise DomainError("row must be a positive integer", data={"row": row})
    return (int(row) - 1) % 4 + 1


def cell_of(row: int) -> int:
    """行所在的格 (四行一格, 从 0 起)"""
    residue(row)
    return (int(row) - 1) // 4


def row_assignment(q: int) -> Tuple[FunctionKind, ...]:
    """(ζ, Γ, cn, J_p) 左移 q − 1 位"""
    if q not in (1, 2, 3, 4):
        raise DomainError("residue q must be one of 1..4", data={"q": q})
    shift = q - 1
    return BASE_ORDER[shift:] + BASE_ORDER[:shift]


def make_tag(kind: FunctionKind, k_sq: float, p: int) -> FunctionTag:
    """按种类补齐 cn 的 k² 或 J 的 p"""
    if kind is FunctionKind.JACOBI_CN:
        return FunctionTag.cn(k_sq)
    if kind is FunctionKind.BESSEL_J:
        return FunctionTag.bessel_j(p)
    return FunctionTag(kind)


def row_tags(q: int, k_sq: float, p: int) -> Tuple[FunctionTag, ...]:
    return tuple(make_tag(kind, k_sq, p) for kind in row_assignment(q))
