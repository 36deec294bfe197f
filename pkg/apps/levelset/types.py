import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from apps.core.exceptions import DomainError
from apps.specfun.types import ComplexValue, FunctionTag


class SearchStrategy(str, Enum):
    """求点策略"""

    LINE_SCAN = "line_scan"
    CONTINUATION = "continuation"


class Scheme(str, Enum):
    """水平集分配方案"""

    SIMPLE = "simple"
    CYCLIC = "cyclic"


@dataclass(frozen=True)
class Region:
    """复平面矩形 [re_min, re_max] × [im_min, im_max]"""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self) -> None:
        bounds = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(math.isfinite(v) for v in bounds):
            raise DomainError("region bounds must be finite", data={"bounds": list(bounds)})
        if not (self.re_min < self.re_max and self.im_min <= self.im_max):
            raise DomainError("region needs re_min < re_max and im_min <= im_max", data={"bounds": list(bounds)})

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    def scaled(self, factor: float) -> "Region":
        return Region(self.re_min * factor, self.re_max * factor, self.im_min * factor, self.im_max * factor)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.re_min, self.re_max, self.im_min, self.im_max)


@dataclass(frozen=True)
class SearchId:
    """确定性的搜索记录"""

    strategy: SearchStrategy
    region: Tuple[float, float, float, float]
    region_index: int
    line: int
    cell: int
    trace_steps: int = 0

    def __str__(self) -> str:
        bounds = ",".join(repr(v) for v in self.region)
        return (
            f"{self.strategy.value}:r{self.region_index}[{bounds}]"
            f":line{self.line}:cell{self.cell}:trace{self.trace_steps}"
        )


@dataclass(frozen=True)
class LocusRequest:
    """求 |F(ns)| = c 上一点的请求; region 为 s 平面矩形, 为空时用默认区域"""

    tag: FunctionTag
    n: int
    target_c: float
    region: Optional[Region] = None
    strategy: SearchStrategy = SearchStrategy.LINE_SCAN
    line_step: float = 0.05
    tol: float = 1e-10

    def __post_init__(self) -> None:
        if not (math.isfinite(self.target_c) and self.target_c > 0.0):
            raise DomainError("target_c must be positive and finite", data={"target_c": self.target_c})
        if int(self.n) != self.n or self.n < 1:
            raise DomainError("n must be a positive integer", data={"n": self.n})
        if not self.line_step > 0.0:
            raise DomainError("line_step must be positive", data={"line_step": self.line_step})


@dataclass(frozen=True)
class LocusPoint:
    """水平集上的点"""

    tag: FunctionTag
    n: int
    target_c: float
    s: ComplexValue
    achieved: float
    search_id: str

    @property
    def relative_error(self) -> float:
        return abs(self.achieved - self.target_c) / self.target_c


@dataclass
class TraceResult:
    """延拓结果"""

    points: List[LocusPoint] = field(default_factory=list)
    closed: bool = False
    stop_reason: str = "steps"
