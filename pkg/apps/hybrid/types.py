from dataclasses import asdict, dataclass
from typing import Any, Dict, Tuple

from apps.ladder.types import SegmentInterval


@dataclass(frozen=True)
class MeanValueIntegrals:
    """逆迭代区间上的四个积分"""

    rev_seg: SegmentInterval
    # D_l = ∫ f_l(φ₁(t)) dt
    denominators: Tuple[float, float]
    # N_l = ∫ f_l(φ₁(t)) Z̃²(t) dt
    numerators: Tuple[float, float]

    @property
    def means(self) -> Tuple[float, float]:
        """f_l 在 rev_seg 上的平均"""
        return (self.denominators[0] / self.rev_seg.length, self.denominators[1] / self.rev_seg.length)

    @property
    def weighted_means(self) -> Tuple[float, float]:
        """N_l / D_l"""
        return (self.numerators[0] / self.denominators[0], self.numerators[1] / self.denominators[1])


@dataclass(frozen=True)
class HybridConstants:
    """完全混合公式 c₁c₂ + λc₃ = c₄ 的点与常数"""

    L: int
    U: float
    base_seg: SegmentInterval
    rev_seg: SegmentInterval
    alpha0: Tuple[float, float]
    alpha1: Tuple[float, float]
    beta1: float
    c1: float
    c2: float
    c3: float
    c4: float
    lam: float
    residual: float
    integrals: MeanValueIntegrals

    @property
    def constants(self) -> Tuple[float, float, float, float]:
        return (self.c1, self.c2, self.c3, self.c4)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["base_seg"] = self.base_seg.as_list()
        data["rev_seg"] = self.rev_seg.as_list()
        data["integrals"] = {
            "denominators": list(self.integrals.denominators),
            "numerators": list(self.integrals.numerators),
        }
        data["alpha0"] = list(self.alpha0)
        data["alpha1"] = list(self.alpha1)
        return data
