import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from apps.core.exceptions import DomainError

EULER_GAMMA = float(np.euler_gamma)
HALF_PI = math.pi / 2.0


class OmegaVariant(str, Enum):
    """ω(t) 的取法"""

    LEADING_LOG = "leading_log"  # ln t
    CALIBRATED = "calibrated"  # ln(t/2π) + 1 + γ
    MEAN_SQUARE = "mean_square"  # ln(t/2π) + 2γ


@dataclass(frozen=True)
class SegmentInterval:
    """临界线上的区间 [a, b]"""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError("segment endpoints must be finite", data={"a": self.a, "b": self.b})
        if not self.a < self.b:
            raise DomainError("segment needs a < b", data={"a": self.a, "b": self.b})

    @classmethod
    def base(cls, L: int, U: float) -> "SegmentInterval":
        """[πL, πL + U], 0 < U < π/2"""
        if not 0.0 < U < HALF_PI:
            raise DomainError("U must lie in (0, pi/2)", data={"U": U})
        start = math.pi * L
        return cls(start, start + U)

    @property
    def length(self) -> float:
        return self.b - self.a

    def contains(self, x: float, strict: bool = True) -> bool:
        if strict:
            return self.a < x < self.b
        return self.a <= x <= self.b

    def as_list(self) -> list:
        return [self.a, self.b]


@dataclass(frozen=True)
class LadderDiagnostic:
    """单个 L 的阶梯诊断行"""

    L: int
    T: float
    reverse_T: float
    gap: float
    rho: float
    reference: float
    ratio: float
    round_trip_error: float
