"""
完全混合公式 (母公式)

设 base = [πL, πL+U], rev = ¹base 为其第一次逆迭代, f₁ = sin², f₂ = cos²。
换元 u = φ₁(t), du = Z̃²(t) dt 给出
    ∫_base f_l(u) du = ∫_rev f_l(φ₁(t)) Z̃²(t) dt =: N_l .
对右边两次使用第一中值定理:
    N_l = Z̃²(α₁^l) · D_l,            D_l = ∫_rev f_l(φ₁(t)) dt
    D_l = f_l(α₀^l) · |rev|,         α₀^l ∈ (πL, πL+U)
(第二步利用 f_l(φ₁(t)) = f_l(φ₁(t) − πL) 取遍 f_l 在 base 上的值)。
由 N₁ + N₂ = U = Z̃²(β₁)·|rev| 得
    Z̃²(α₁¹) sin²α₀¹ + Z̃²(α₁²) cos²α₀² = Z̃²(β₁),
即 c₁c₂ + λc₃ = c₄, 中性因子 λ = Z̃²(α₁²)。

中值点有多个时一律取最小者。
"""
import logging
import math
from dataclasses import replace
from typing import Callable, Iterable, List, Optional

import numpy as np
from scipy.optimize import brentq

from apps.core.exceptions import DegenerateConstantError, DomainError, NoRootError
from apps.core.logging import log_timing
from apps.ladder.services import LadderModel, integrate_on_reverse, reverse_iterate, z_tilde_sq
from apps.ladder.types import HALF_PI, SegmentInterval

from .types import HybridConstants, MeanValueIntegrals

logger = logging.getLogger(__name__)

# 常数为零的判定阈值
DEGENERATE_TOL = 1e-12
# 最小根扫描: 至少 400 点, 步长不超过 0.005
SCAN_POINTS = 400
SCAN_STEP = 0.005
RETRY_SHIFT = 1e-3

_WEIGHTS = {1: lambda u: math.sin(u) ** 2, 2: lambda u: math.cos(u) ** 2}


def _weight(l: int) -> Callable[[float], float]:
    if l not in _WEIGHTS:
        raise DomainError("l must be 1 or 2", data={"l": l})
    return _WEIGHTS[l]


def mean_value_integrals(L: int, U: float, model: LadderModel) -> MeanValueIntegrals:
    """计算 D_l, N_l"""
    base = SegmentInterval.base(L, U)
    rev = reverse_iterate(base, model)
    denominators = tuple(integrate_on_reverse(lambda t, u, f=_weight(l): f(u), rev, model) for l in (1, 2))
    numerators = tuple(
        integrate_on_reverse(lambda t, u, f=_weight(l): f(u) * z_tilde_sq(t, model), rev, model) for l in (1, 2)
    )
    return MeanValueIntegrals(rev, denominators, numerators)  # type: ignore[arg-type]


def _alpha0(l: int, L: int, U: float, data: MeanValueIntegrals) -> float:
    # 在 (πL, πL+U) 上 sin² 严格增, cos² 严格减, 根唯一
    mean = data.means[l - 1]
    if not 0.0 <= mean <= 1.0:
        raise NoRootError("weight mean outside [0, 1]", data={"l": l, "mean": mean})
    offset = math.asin(math.sqrt(mean)) if l == 1 else math.acos(math.sqrt(mean))
    x = math.pi * L + offset
    if not SegmentInterval.base(L, U).contains(x):
        raise NoRootError("alpha0 outside (pi L, pi L + U)", data={"l": l, "L": L, "U": U, "mean": mean, "x": x})
    return x


def smallest_root(target: float, rev: SegmentInterval, model: LadderModel) -> float:
    """rev 内满足 Z̃²(x) = target 的最小根"""
    count = max(SCAN_POINTS, int(math.ceil(rev.length / SCAN_STEP)) + 1)
    grid = np.linspace(rev.a, rev.b, count)
    excess = model.integrand(grid) - target
    hits = np.flatnonzero(excess[:-1] * excess[1:] <= 0.0)
    if hits.size == 0:
        raise NoRootError(
            "Z~^2 does not attain the target on the reverse segment",
            data={
                "target": target,
                "rev": rev.as_list(),
                "min": float(excess.min() + target),
                "max": float(excess.max() + target),
            },
        )
    i = int(hits[0])
    if excess[i] == 0.0:
        return float(grid[i])
    return float(brentq(lambda x: z_tilde_sq(x, model) - target, grid[i], grid[i + 1], xtol=1e-14, maxiter=200))


def solve_alpha0(l: int, L: int, U: float, model: LadderModel) -> float:
    """α₀^l: f_l(x) = (1/|rev|) ∫_rev f_l(φ₁)"""
    _weight(l)
    return _alpha0(l, L, U, mean_value_integrals(L, U, model))


def solve_alpha1(l: int, L: int, U: float, model: LadderModel) -> float:
    """α₁^l: Z̃²(x) = N_l / D_l"""
    _weight(l)
    data = mean_value_integrals(L, U, model)
    return smallest_root(data.weighted_means[l - 1], data.rev_seg, model)


def solve_beta1(L: int, U: float, model: LadderModel) -> float:
    """β₁: Z̃²(x) = U / |rev|"""
    rev = reverse_iterate(SegmentInterval.base(L, U), model)
    return smallest_root(U / rev.length, rev, model)


def mother_residual(c1: float, c2: float, c3: float, c4: float, lam: float) -> float:
    """|c₁c₂ + λc₃ − c₄|"""
    return abs(c1 * c2 + lam * c3 - c4)


@log_timing(level=logging.DEBUG)
def compute_hybrid_constants(L: int, U: float, model: LadderModel, L0: Optional[int] = None) -> HybridConstants:
    """求全部中值点与常数"""
    if L0 is not None and L < L0:
        raise DomainError("L below L0", data={"L": L, "L0": L0})
    if not 0.0 < U < HALF_PI:
        raise DomainError("U must lie in (0, pi/2)", data={"U": U})
    base = SegmentInterval.base(L, U)
    data = mean_value_integrals(L, U, model)
    rev = data.rev_seg

    alpha0 = (_alpha0(1, L, U, data), _alpha0(2, L, U, data))
    alpha1 = tuple(smallest_root(target, rev, model) for target in data.weighted_means)
    beta1 = smallest_root(U / rev.length, rev, model)

    c1 = z_tilde_sq(alpha1[0], model)
    c2 = math.sin(alpha0[0]) ** 2
    c3 = math.cos(alpha0[1]) ** 2
    c4 = z_tilde_sq(beta1, model)
    lam = z_tilde_sq(alpha1[1], model)

    named = {"c1": c1, "c2": c2, "c3": c3, "c4": c4, "lambda": lam}
    degenerate = {name: value for name, value in named.items() if value < DEGENERATE_TOL}
    if degenerate:
        raise DegenerateConstantError(
            "hybrid constant vanishes; retry with a perturbed U",
            data={"L": L, "U": U, "constants": degenerate, "retry_U": [U - RETRY_SHIFT, U + RETRY_SHIFT]},
        )

    result = HybridConstants(
        L=int(L),
        U=float(U),
        base_seg=base,
        rev_seg=rev,
        alpha0=alpha0,
        alpha1=alpha1,  # type: ignore[arg-type]
        beta1=beta1,
        c1=c1,
        c2=c2,
        c3=c3,
        c4=c4,
        lam=lam,
        residual=mother_residual(c1, c2, c3, c4, lam),
        integrals=data,
    )
    logger.info(
        "Hybrid constants computed",
        extra={"data": {"L": L, "U": U, "residual": result.residual, "c4": c4, "rev": rev.as_list()}},
    )
    return result


def verify_mother(h: HybridConstants, model: LadderModel) -> float:
    """从存储的点重新求值, 返回母公式残差"""
    c1 = z_tilde_sq(h.alpha1[0], model)
    c2 = math.sin(h.alpha0[0]) ** 2
    c3 = math.cos(h.alpha0[1]) ** 2
    c4 = z_tilde_sq(h.beta1, model)
    lam = z_tilde_sq(h.alpha1[1], model)
    return mother_residual(c1, c2, c3, c4, lam)


def perturbed(
    h: HybridConstants,
    model: LadderModel,
    alpha0_shift: float = 0.0,
    alpha1_shift: float = 0.0,
    beta1_shift: float = 0.0,
) -> HybridConstants:
    """移动中值点并重新求常数, 用于灵敏度检查"""
    alpha0 = (h.alpha0[0] + alpha0_shift, h.alpha0[1] + alpha0_shift)
    alpha1 = (h.alpha1[0] + alpha1_shift, h.alpha1[1] + alpha1_shift)
    beta1 = h.beta1 + beta1_shift
    moved = replace(
        h,
        alpha0=alpha0,
        alpha1=alpha1,
        beta1=beta1,
        c1=z_tilde_sq(alpha1[0], model),
        c2=math.sin(alpha0[0]) ** 2,
        c3=math.cos(alpha0[1]) ** 2,
        c4=z_tilde_sq(beta1, model),
        lam=z_tilde_sq(alpha1[1], model),
    )
    return replace(moved, residual=mother_residual(moved.c1, moved.c2, moved.c3, moved.c4, moved.lam))


def hybrid_with_retry(L: int, U: float, model: LadderModel) -> HybridConstants:
    """退化时把 U 微调 ±1e-3 后重试"""
    try:
        return compute_hybrid_constants(L, U, model)
    except DegenerateConstantError as first:
        for shifted in (U + RETRY_SHIFT, U - RETRY_SHIFT):
            if not 0.0 < shifted < HALF_PI:
                continue
            logger.warning("Degenerate hybrid constant, retrying", extra={"data": {"L": L, "U": U, "retry_U": shifted}})
            try:
                return compute_hybrid_constants(L, shifted, model)
            except DegenerateConstantError:
                continue
        raise first


def hybrid_grid(Ls: Iterable[int], Us: Iterable[float], model: LadderModel) -> List[HybridConstants]:
    """(L, U) 网格扫描"""
    Us = list(Us)
    return [hybrid_with_retry(L, U, model) for L in Ls for U in Us]
