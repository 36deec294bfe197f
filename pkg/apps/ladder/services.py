"""
Jacob 阶梯的可计算模型

φ₁ 由显式常微分方程 dφ₁/dt = Z̃²(t) = Z(t)² / ω(t) 定义, 其中 Z 为 Hardy Z 函数
(|ζ(½+it)|² = Z(t)²)。构造时从锚点 t₀ 起按间距 π/4 建立检查点表
(t_i, φ₁(t_i), depth_i); 任意 t 处
    φ₁(t) = φ₁(t_i) + GL_{depth_i}[t_i, t]
使用与检查点面板相同的固定求积规则, 因此 φ₁ 在 t 上光滑且在检查点处连续。
锚点条件: t₀ − φ₁(t₀) = (1 − γ)·t₀ / ln t₀。

逆迭代 ¹T = φ₁⁻¹(T): 在检查点表上二分定位面板, 再用 brentq 细化。
φ₁ 严格递增 (Z̃² 只有孤立零点), 根唯一。
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional

import numpy as np
from django.conf import settings
from scipy.optimize import brentq

from apps.core.exceptions import BracketError, DomainError
from apps.core.logging import log_timing
from apps.specfun.zeta import RS_THRESHOLD, hardy_z

from .quadrature import adaptive_panels, integrate, panel_nodes, panel_rule
from .types import EULER_GAMMA, LadderDiagnostic, OmegaVariant, SegmentInterval

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
DEFAULT_SPACING = math.pi / 4.0
# 构造时每批面板数
_BUILD_BATCH = 4096


def _defaults() -> dict:
    return getattr(settings, "CROSSBREED", {}) if settings.configured else {}


def omega_values(t: np.ndarray, variant: OmegaVariant) -> np.ndarray:
    """ω(t), 不做定义域检查"""
    t = np.asarray(t, dtype=float)
    if variant is OmegaVariant.LEADING_LOG:
        return np.log(t)
    if variant is OmegaVariant.CALIBRATED:
        return np.log(t / TWO_PI) + 1.0 + EULER_GAMMA
    return np.log(t / TWO_PI) + 2.0 * EULER_GAMMA


def anchor_value(t0: float) -> float:
    """锚点处的 φ₁(t₀)"""
    return t0 - (1.0 - EULER_GAMMA) * t0 / math.log(t0)


@dataclass(frozen=True, eq=False)
class LadderModel:
    """阶梯模型, 构造后不可变"""

    omega_variant: OmegaVariant
    anchor_t0: float
    quad_tol: float
    spacing: float
    rs_threshold: float
    knots: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    depths: np.ndarray = field(repr=False)

    @property
    def t_max(self) -> float:
        return float(self.knots[-1])

    @property
    def phi_max(self) -> float:
        return float(self.values[-1])

    def integrand(self, t: np.ndarray) -> np.ndarray:
        """Z̃²(t), 向量化"""
        t = np.asarray(t, dtype=float)
        return hardy_z(t.ravel(), self.rs_threshold).reshape(t.shape) ** 2 / omega_values(t, self.omega_variant)

    @classmethod
    @log_timing(message="ladder model built")
    def build(
        cls,
        t_max: float,
        omega_variant: OmegaVariant = OmegaVariant.CALIBRATED,
        anchor_t0: Optional[float] = None,
        quad_tol: Optional[float] = None,
        spacing: Optional[float] = None,
        rs_threshold: Optional[float] = None,
    ) -> "LadderModel":
        """从锚点积分到 t_max 建立检查点表"""
        defaults = _defaults()
        anchor_t0 = float(anchor_t0 if anchor_t0 is not None else defaults.get("ANCHOR_T0", 10.0))
        quad_tol = float(quad_tol if quad_tol is not None else defaults.get("QUAD_TOL", 1e-10))
        spacing = float(spacing if spacing is not None else defaults.get("CHECKPOINT_SPACING", DEFAULT_SPACING))
        rs_threshold = float(rs_threshold if rs_threshold is not None else defaults.get("RS_THRESHOLD", RS_THRESHOLD))
        if anchor_t0 < 10.0:
            raise DomainError("anchor_t0 must be >= 10", data={"anchor_t0": anchor_t0})
        if not t_max > anchor_t0:
            raise DomainError("t_max must exceed the anchor", data={"t_max": t_max, "anchor_t0": anchor_t0})
        if quad_tol <= 0 or spacing <= 0:
            raise DomainError("quad_tol and spacing must be positive", data={"quad_tol": quad_tol, "spacing": spacing})

        panels = int(math.ceil((t_max - anchor_t0) / spacing))
        knots = anchor_t0 + spacing * np.arange(panels + 1, dtype=float)
        variant = OmegaVariant(omega_variant)
        shell = cls(variant, anchor_t0, quad_tol, spacing, rs_threshold, knots, np.empty(0), np.empty(0, dtype=int))

        increments = np.empty(panels)
        depths = np.empty(panels, dtype=int)
        for start in range(0, panels, _BUILD_BATCH):
            stop = min(panels, start + _BUILD_BATCH)
            a, b = knots[start:stop], knots[start + 1 : stop + 1]
            min_depth = np.where(_sign_changes(a, b, rs_threshold), 2, 1)
            increments[start:stop], depths[start:stop] = adaptive_panels(shell.integrand, a, b, quad_tol, min_depth)

        values = anchor_value(anchor_t0) + np.concatenate(([0.0], np.cumsum(increments)))
        if np.any(np.diff(values) <= 0.0):
            raise DomainError("checkpoint values are not strictly increasing", data={"t_max": t_max})
        for array in (knots, values, depths):
            array.setflags(write=False)
        logger.info(
            "Ladder model built",
            extra={
                "data": {
                    "omega_variant": variant.value,
                    "anchor_t0": anchor_t0,
                    "t_max": float(knots[-1]),
                    "panels": panels,
                    "max_depth": int(depths.max()),
                }
            },
        )
        return cls(variant, anchor_t0, quad_tol, spacing, rs_threshold, knots, values, depths)

    @classmethod
    def covering(cls, T: float, **kwargs) -> "LadderModel":
        """足以对 T 做逆迭代的模型"""
        return cls.build(1.25 * T + 50.0, **kwargs)


def _sign_changes(a: np.ndarray, b: np.ndarray, rs_threshold: float) -> np.ndarray:
    """面板内 Z 是否变号 (ζ 零点)"""
    nodes = np.hstack([a[:, None], panel_nodes(a, b, 0), b[:, None]])
    signs = np.sign(hardy_z(nodes.ravel(), rs_threshold).reshape(nodes.shape))
    return np.any(signs[:, 1:] * signs[:, :-1] <= 0.0, axis=1)


def _check_ordinate(t: np.ndarray, model: LadderModel) -> None:
    if np.any(t < model.anchor_t0):
        raise DomainError(
            "ordinate below the ladder anchor",
            data={"min_t": float(t.min()), "anchor_t0": model.anchor_t0},
        )
    if np.any(t > model.t_max):
        raise DomainError(
            "ordinate beyond the checkpoint table; build a covering model",
            data={"max_t": float(t.max()), "t_max": model.t_max},
        )


def omega(t: float, model: LadderModel) -> float:
    """ω(t)"""
    if t < model.anchor_t0:
        raise DomainError("omega needs t >= anchor_t0", data={"t": t, "anchor_t0": model.anchor_t0})
    return float(omega_values(t, model.omega_variant))


def z_tilde_sq(t: float, model: LadderModel) -> float:
    """Z̃²(t) = |ζ(½+it)|² / ω(t)"""
    if t < model.anchor_t0:
        raise DomainError("z_tilde_sq needs t >= anchor_t0", data={"t": t, "anchor_t0": model.anchor_t0})
    return float(model.integrand(np.array([t]))[0])


def phi1_array(t: np.ndarray, model: LadderModel) -> np.ndarray:
    """φ₁(t), 向量化"""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    _check_ordinate(t, model)
    last = model.knots.size - 2
    index = np.clip(np.floor((t - model.anchor_t0) / model.spacing).astype(int), 0, last)
    out = np.empty_like(t)
    panel_depths = model.depths[index]
    for depth in np.unique(panel_depths):
        mask = panel_depths == depth
        start = model.knots[index[mask]]
        out[mask] = model.values[index[mask]] + panel_rule(model.integrand, start, t[mask], int(depth))
    return out


def phi1(t: float, model: LadderModel) -> float:
    """φ₁(t)"""
    return float(phi1_array(np.array([t]), model)[0])


def phi1_inverse(T: float, model: LadderModel) -> float:
    """¹T: φ₁(¹T) = T"""
    if T < model.values[0]:
        raise DomainError("T below phi1(anchor_t0)", data={"T": T, "phi1_anchor": float(model.values[0])})
    if T > model.phi_max:
        raise BracketError("T beyond the checkpoint table", data={"T": T, "phi_max": model.phi_max})
    index = int(np.searchsorted(model.values, T, side="right")) - 1
    index = min(index, model.knots.size - 2)
    if model.values[index] == T:
        return float(model.knots[index])
    a, b = float(model.knots[index]), float(model.knots[index + 1])
    try:
        return float(brentq(lambda x: phi1(x, model) - T, a, b, xtol=1e-12, maxiter=200))
    except ValueError as exc:
        raise BracketError("phi1 - T does not change sign on the panel", data={"T": T, "a": a, "b": b}) from exc


def reverse_iterate(seg: SegmentInterval, model: LadderModel) -> SegmentInterval:
    """第一次逆迭代"""
    return SegmentInterval(phi1_inverse(seg.a, model), phi1_inverse(seg.b, model))


def rho_distance(seg: SegmentInterval, model: LadderModel) -> float:
    """ρ = ¹a − b"""
    return reverse_iterate(seg, model).a - seg.b


def integrate_on_reverse(
    h: Callable[[float, float], float],
    rev: SegmentInterval,
    model: LadderModel,
    tol: Optional[float] = None,
) -> float:
    """∫_rev h(t, φ₁(t)) dt"""
    tol = tol if tol is not None else 10.0 * model.quad_tol
    return integrate(lambda t: h(t, phi1(t, model)), rev.a, rev.b, tol)


def integrate_against_ladder(
    g: Callable[[float], float],
    seg: SegmentInterval,
    model: LadderModel,
    tol: Optional[float] = None,
) -> float:
    """∫_{¹seg} g(φ₁(t))·Z̃²(t) dt, 换元后等于 ∫_seg g(u) du"""
    rev = reverse_iterate(seg, model)
    return integrate_on_reverse(lambda t, u: g(u) * z_tilde_sq(t, model), rev, model, tol)


def distance_reference(L: int) -> float:
    """π(1−γ)L / ln L"""
    return math.pi * (1.0 - EULER_GAMMA) * L / math.log(L)


def ladder_diagnostics(Ls: Iterable[int], model: LadderModel, U: float = 1.0) -> List[LadderDiagnostic]:
    """按 L 列出 ¹T − T, ρ(L) 与参考值"""
    rows = []
    for L in Ls:
        seg = SegmentInterval.base(L, U)
        rev = reverse_iterate(seg, model)
        rho = rev.a - seg.b
        reference = distance_reference(L)
        rows.append(
            LadderDiagnostic(
                L=int(L),
                T=seg.a,
                reverse_T=rev.a,
                gap=rev.a - seg.a,
                rho=rho,
                reference=reference,
                ratio=rho / reference,
                round_trip_error=abs(phi1(rev.a, model) - seg.a) / seg.a,
            )
        )
        logger.debug("Ladder diagnostic", extra={"data": {"L": L, "rho": rho, "ratio": rho / reference}})
    return rows
