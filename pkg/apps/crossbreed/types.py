from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from apps.core.exceptions import ErrorReport
from apps.levelset.types import LocusPoint, Scheme
from apps.specfun.dispatch import eval_abs
from apps.specfun.types import ComplexValue, FunctionKind, FunctionTag

# 排版表与 LaTeX 中的函数名
TOKEN_NAMES = {
    FunctionKind.ZETA: "zeta",
    FunctionKind.GAMMA: "Gamma",
    FunctionKind.JACOBI_CN: "cn",
    FunctionKind.BESSEL_J: "J",
}

INTERNAL = "internal"
EXTERNAL = "external"
SAME_RESIDUE = "same-residue"


@dataclass(frozen=True)
class FactorRef:
    """方程中的一个因子 |F(n s_l^n)|: 函数, 行号 (即倍数), 位置, 点"""

    tag: FunctionTag
    row: int
    slot: int
    s: ComplexValue
    target_c: float
    achieved: float

    @classmethod
    def from_point(cls, point: LocusPoint, slot: int) -> "FactorRef":
        return cls(point.tag, point.n, slot, point.s, point.target_c, point.achieved)

    @property
    def token(self) -> str:
        """kind(倍数,位置,上标)"""
        return f"{TOKEN_NAMES[self.tag.kind]}({self.row},{self.slot},{self.row})"

    @property
    def key(self) -> Tuple[str, int, int]:
        return (self.tag.label, self.row, self.slot)

    def evaluate(self) -> float:
        """按坐标重新求值"""
        return eval_abs(self.tag, self.row, self.s)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "token": self.token,
            "tag": self.tag.label,
            "kind": self.tag.kind.value,
            "k_sq": self.tag.k_sq,
            "p": self.tag.p,
            "row": self.row,
            "slot": self.slot,
            "re": self.s.re,
            "im": self.s.im,
            "target_c": self.target_c,
            "value": self.achieved,
        }


Term = Tuple[FactorRef, ...]


def term_tokens(terms: Tuple[Term, ...]) -> List[List[str]]:
    return [[f.token for f in term] for term in terms]


def factor_signature(terms: Tuple[Term, ...]) -> Counter:
    """按 (函数, 位置) 记的项多重集"""
    return Counter(tuple(sorted((f.tag.label, f.slot) for f in term)) for term in terms)


@dataclass(frozen=True)
class RowEquation:
    """带中性因子的行方程 A + λB = D"""

    scheme: Scheme
    row: int
    residue_q: Optional[int]
    points: Tuple[LocusPoint, LocusPoint, LocusPoint, LocusPoint]
    A: float
    B: float
    D: float
    lam: float
    factor_refs: Tuple[FactorRef, FactorRef, FactorRef, FactorRef]

    @property
    def identifier(self) -> str:
        return f"{Scheme(self.scheme).value}:{self.row}"

    @property
    def residual(self) -> float:
        return abs(self.A + self.lam * self.B - self.D) / self.D

    @property
    def a_factors(self) -> Term:
        return self.factor_refs[:2]

    @property
    def b_factor(self) -> FactorRef:
        return self.factor_refs[2]

    @property
    def d_factor(self) -> FactorRef:
        return self.factor_refs[3]


@dataclass(frozen=True)
class PairClass:
    """杂交对的类别; interaction 只作元数据"""

    label: str
    interaction: str


@dataclass(frozen=True)
class MetaEquation:
    """消去中性因子后的元函数方程"""

    scheme: Scheme
    rows: Tuple[int, int]
    parents: Tuple[str, str]
    lhs_factors: Tuple[Term, ...]
    rhs_factors: Tuple[Term, ...]
    lhs_value: float
    rhs_value: float
    residual: float
    pair_class: PairClass

    @property
    def factors(self) -> List[FactorRef]:
        return [f for side in (self.lhs_factors, self.rhs_factors) for term in side for f in term]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scheme": Scheme(self.scheme).value,
            "rows": list(self.rows),
            "parents": list(self.parents),
            "class_label": self.pair_class.label,
            "interaction": self.pair_class.interaction,
            "lhs_factors": [[f.to_dict() for f in term] for term in self.lhs_factors],
            "rhs_factors": [[f.to_dict() for f in term] for term in self.rhs_factors],
            "lhs_value": self.lhs_value,
            "rhs_value": self.rhs_value,
            "residual": self.residual,
        }


@dataclass
class FamilyResult:
    """一组杂交的结果; 失败的对不影响其余"""

    equations: List[MetaEquation] = field(default_factory=list)
    failures: List[ErrorReport] = field(default_factory=list)

    def by_class(self) -> Dict[str, List[MetaEquation]]:
        grouped: Dict[str, List[MetaEquation]] = {}
        for meta in self.equations:
            grouped.setdefault(meta.pair_class.label, []).append(meta)
        return grouped


class SymmetryKind(str, Enum):
    """对称性种类"""

    K = "K"
    G = "G"


@dataclass
class SymmetryEntry:
    pair: Tuple[int, int]
    forward: Optional[float] = None
    backward: Optional[float] = None
    deviation: Optional[float] = None
    numeric: bool = False
    structural: bool = False
    provenance: bool = False
    error: Optional[ErrorReport] = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.numeric and self.structural and self.provenance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pair": list(self.pair),
            "forward": self.forward,
            "backward": self.backward,
            "deviation": self.deviation,
            "numeric": self.numeric,
            "structural": self.structural,
            "provenance": self.provenance,
            "passed": self.passed,
            "error": self.error.to_dict() if self.error else None,
        }


@dataclass
class SymmetryReport:
    """K / G 对称性检查报告"""

    kind: SymmetryKind
    tol: float
    entries: List[SymmetryEntry] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        values = [e.deviation for e in self.entries if e.deviation is not None]
        return max(values) if values else 0.0

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failures(self) -> List[SymmetryEntry]:
        return [e for e in self.entries if not e.passed]
