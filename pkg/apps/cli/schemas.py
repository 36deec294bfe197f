"""
JSON 产物

键排序, 固定缩进, 浮点数用最短往返表示, 不写时间戳。
"""
import json
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError

from apps.core.exceptions import ArtifactError, BaseError, ErrorReport
from apps.crossbreed.types import FactorRef, MetaEquation, Term
from apps.crossbreed.typeset import typeset_diff
from apps.hybrid.types import HybridConstants
from apps.ladder.types import LadderDiagnostic
from apps.levelset.types import Scheme
from apps.specfun.types import ComplexValue, FunctionKind, FunctionTag


class Schema(BaseModel):
    model_config = ConfigDict(extra="forbid")


class FactorSchema(Schema):
    """一个因子及其点坐标"""

    token: str
    tag: str
    kind: FunctionKind
    k_sq: Optional[float] = None
    p: Optional[int] = None
    row: int
    slot: int
    re: float
    im: float
    target_c: float
    value: float

    @classmethod
    def from_factor(cls, factor: FactorRef) -> "FactorSchema":
        return cls(**factor.to_dict())

    def to_factor(self) -> FactorRef:
        """按存储的坐标重建因子; 参数非法时为 ArtifactError"""
        try:
            tag = FunctionTag(self.kind, k_sq=self.k_sq, p=self.p)
            point = ComplexValue(self.re, self.im)
        except BaseError as exc:
            raise ArtifactError("stored factor is invalid", data={"token": self.token, "error": exc.to_dict()})
        return FactorRef(tag, self.row, self.slot, point, self.target_c, self.value)


class EquationSchema(Schema):
    """元函数方程"""

    scheme: Scheme
    rows: Tuple[int, int]
    parents: Tuple[str, str]
    class_label: str
    interaction: str
    lhs_factors: List[List[FactorSchema]]
    rhs_factors: List[List[FactorSchema]]
    lhs_value: float
    rhs_value: float
    residual: float
    typeset: Optional[Dict[str, Any]] = None

    @classmethod
    def from_meta(cls, meta: MetaEquation) -> "EquationSchema":
        diff = typeset_diff(meta)
        return cls(**meta.to_dict(), typeset=diff.to_dict() if diff else None)

    def lhs_terms(self) -> Tuple[Term, ...]:
        return tuple(tuple(f.to_factor() for f in term) for term in self.lhs_factors)

    def rhs_terms(self) -> Tuple[Term, ...]:
        return tuple(tuple(f.to_factor() for f in term) for term in self.rhs_factors)


class IntegralsSchema(Schema):
    denominators: Tuple[float, float]
    numerators: Tuple[float, float]


class HybridSchema(Schema):
    """混合常数与中值点"""

    L: int
    U: float
    base_seg: Tuple[float, float]
    rev_seg: Tuple[float, float]
    alpha0: Tuple[float, float]
    alpha1: Tuple[float, float]
    beta1: float
    c1: float
    c2: float
    c3: float
    c4: float
    lam: float
    residual: float
    integrals: IntegralsSchema

    @classmethod
    def from_constants(cls, h: HybridConstants) -> "HybridSchema":
        return cls(**h.to_dict())

    @property
    def relative_residual(self) -> float:
        """由存储的常数重算 |c₁c₂ + λc₃ − c₄| / c₄"""
        return abs(self.c1 * self.c2 + self.lam * self.c3 - self.c4) / self.c4


class ErrorReportSchema(Schema):
    code: int
    name: str
    message: str
    data: Dict[str, Any] = {}

    @classmethod
    def from_report(cls, report: ErrorReport) -> "ErrorReportSchema":
        return cls(**report.to_dict())


class HybridArtifact(Schema):
    config: Dict[str, Any]
    hybrid: HybridSchema
    mother_residual: float
    tolerance: float


class GenerateArtifact(Schema):
    """generate 的输出, verify 的输入"""

    config: Dict[str, Any]
    hybrid: HybridSchema
    equations: List[EquationSchema]
    failures: List[ErrorReportSchema]
    tolerance: float


class LadderRow(Schema):
    L: int
    T: float
    reverse_T: float
    gap: float
    rho: float
    reference: float
    ratio: float
    round_trip_error: float

    @classmethod
    def from_diagnostic(cls, row: LadderDiagnostic) -> "LadderRow":
        return cls(**asdict(row))


class LadderArtifact(Schema):
    config: Dict[str, Any]
    rows: List[LadderRow]


class VerifyEntry(Schema):
    """一个方程的复核结果"""

    rows: Tuple[int, int]
    class_label: str
    residual: float
    stored_residual: float
    # 重新求值后与存储值不符的因子
    factor_mismatches: List[str]
    # 存储的两边值与存储的因子值一致
    stored_sides_consistent: bool
    passed: bool


class VerifyReport(Schema):
    tolerance: float
    hybrid_residual: float
    hybrid_passed: bool
    max_residual: float
    entries: List[VerifyEntry]
    passed: bool


def dump_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def load_artifact(path: Path) -> GenerateArtifact:
    """读取 generate 产物"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ArtifactError("artifact cannot be read", data={"path": str(path), "reason": str(exc)}) from exc
    try:
        return GenerateArtifact.model_validate_json(text)
    except ValidationError as exc:
        errors = [f"{'.'.join(str(part) for part in err['loc'])}: {err['msg']}" for err in exc.errors()]
        raise ArtifactError("artifact does not match the schema", data={"path": str(path), "errors": errors}) from exc
