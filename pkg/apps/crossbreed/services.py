"""
行方程与杂交

每一行在同一组混合常数下给出 A + λB = D, λ 为所有行共享的中性因子。
两行 a, b 消去 λ:

    (D_a − A_a) / B_a = (D_b − A_b) / B_b
    ⇒ A_a·B_b + D_b·B_a = A_b·B_a + D_a·B_b

左边即 K(a, b) (同余类的 Cyclic 行记为 G), 右边为 K(b, a)。
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from apps.core.exceptions import (
    AccuracyError,
    BaseError,
    DomainError,
    ErrorReport,
    NeutralFactorMismatchError,
    ProvenanceMismatchError,
    ResidueMismatchError,
)
from apps.core.logging import log_timing
from apps.hybrid.services import verify_mother
from apps.hybrid.types import HybridConstants
from apps.ladder.services import LadderModel
from apps.levelset.services import build_locus_family
from apps.levelset.types import LocusPoint, Scheme

from .assignment import cell_of, residue, row_assignment
from .types import (
    EXTERNAL,
    INTERNAL,
    SAME_RESIDUE,
    FactorRef,
    FamilyResult,
    MetaEquation,
    PairClass,
    RowEquation,
    SymmetryEntry,
    SymmetryKind,
    SymmetryReport,
    Term,
    factor_signature,
)

logger = logging.getLogger(__name__)

ROW_TOL = 1e-8
META_TOL = 1e-8
SYMMETRY_TOL = 1e-10
# 因子重新求值与记录值的允许偏差
PROVENANCE_TOL = 1e-9
RESIDUAL_COLUMNS = ["scheme", "row_a", "row_b", "class_label", "interaction", "lhs", "rhs", "residual"]


def relative_residual(x: float, y: float) -> float:
    """|x − y| / max(|x|, |y|)"""
    scale = max(abs(x), abs(y))
    return abs(x - y) / scale if scale > 0.0 else 0.0


def build_row_equation(
    scheme: Scheme,
    n: int,
    h: HybridConstants,
    loci: Sequence[LocusPoint],
) -> RowEquation:
    """由第 n 行的四个点组成 A + λB = D"""
    scheme = Scheme(scheme)
    q = residue(n)
    if len(loci) != 4:
        raise ProvenanceMismatchError("a row needs exactly four locus points", data={"row": n, "count": len(loci)})
    expected_kinds = row_assignment(1 if scheme is Scheme.SIMPLE else q)
    for slot, (point, target, kind) in enumerate(zip(loci, h.constants, expected_kinds), start=1):
        if point.target_c != target or point.n != n or point.tag.kind is not kind:
            raise ProvenanceMismatchError(
                data={
                    "row": n,
                    "slot": slot,
                    "expected": {"c": target, "n": n, "kind": kind.value},
                    "found": {"c": point.target_c, "n": point.n, "kind": point.tag.kind.value},
                }
            )

    a = loci[0].achieved * loci[1].achieved
    b = loci[2].achieved
    d = loci[3].achieved
    equation = RowEquation(
        scheme=scheme,
        row=int(n),
        residue_q=None if scheme is Scheme.SIMPLE else q,
        points=tuple(loci),  # type: ignore[arg-type]
        A=a,
        B=b,
        D=d,
        lam=h.lam,
        factor_refs=tuple(FactorRef.from_point(p, slot) for slot, p in enumerate(loci, start=1)),  # type: ignore
    )
    if equation.residual > ROW_TOL:
        raise AccuracyError(
            "row equation residual exceeds tolerance",
            data={"row": n, "scheme": scheme.value, "residual": equation.residual, "tol": ROW_TOL},
        )
    return equation


def classify_pair(scheme: Scheme, row_a: int, row_b: int) -> PairClass:
    """类别: Simple 为 "simple"; Cyclic 为无序余数对 "(q_a,q_b)" 或 "same-residue" """
    interaction = INTERNAL if cell_of(row_a) == cell_of(row_b) else EXTERNAL
    if Scheme(scheme) is Scheme.SIMPLE:
        return PairClass("simple", interaction)
    qa, qb = residue(row_a), residue(row_b)
    if qa == qb:
        return PairClass(SAME_RESIDUE, interaction)
    lo, hi = sorted((qa, qb))
    return PairClass(f"({lo},{hi})", interaction)


def crossbred_sides(a: Tuple[float, float, float], b: Tuple[float, float, float]) -> Tuple[float, float]:
    """(A, B, D) 两组 → (A_a·B_b + D_b·B_a, A_b·B_a + D_a·B_b)"""
    a_a, b_a, d_a = a
    a_b, b_b, d_b = b
    return a_a * b_b + d_b * b_a, a_b * b_a + d_a * b_b


def _terms(a: RowEquation, b: RowEquation) -> Tuple[Tuple[Term, Term], Tuple[Term, Term]]:
    lhs = (a.a_factors + (b.b_factor,), (b.d_factor, a.b_factor))
    rhs = (b.a_factors + (a.b_factor,), (a.d_factor, b.b_factor))
    return lhs, rhs


def evaluate_terms(terms: Iterable[Term]) -> float:
    """各项因子重新求值后的和"""
    return math.fsum(math.prod(f.evaluate() for f in term) for term in terms)


def crossbreed(a: RowEquation, b: RowEquation) -> MetaEquation:
    """消去两行共享的中性因子"""
    if a.lam != b.lam:
        raise NeutralFactorMismatchError(data={"rows": [a.row, b.row], "lambda": [a.lam, b.lam]})
    if a.scheme != b.scheme or a.row == b.row:
        raise DomainError(
            "crossbreeding needs two distinct rows of one scheme",
            data={"parents": [a.identifier, b.identifier]},
        )
    lhs_terms, rhs_terms = _terms(a, b)
    lhs_value = evaluate_terms(lhs_terms)
    rhs_value = evaluate_terms(rhs_terms)
    return MetaEquation(
        scheme=a.scheme,
        rows=(a.row, b.row),
        parents=(a.identifier, b.identifier),
        lhs_factors=lhs_terms,
        rhs_factors=rhs_terms,
        lhs_value=lhs_value,
        rhs_value=rhs_value,
        residual=relative_residual(lhs_value, rhs_value),
        pair_class=classify_pair(a.scheme, a.row, b.row),
    )


def verify_meta(meta: MetaEquation) -> float:
    """重新求值所有因子, 返回相对残差"""
    return relative_residual(evaluate_terms(meta.lhs_factors), evaluate_terms(meta.rhs_factors))


# 行的点缓存
# ------------------------------------------------------------------------------
def _locus_job(args: Tuple[HybridConstants, Scheme, int, float, int, float]):
    h, scheme, row, k_sq, p, line_step = args
    try:
        return row, build_locus_family(h, scheme, row, k_sq, p, line_step), None
    except BaseError as exc:
        return row, None, exc.report()


class FamilyContext:
    """一组混合常数下各行的点与行方程; 每行只写一次"""

    def __init__(
        self,
        h: HybridConstants,
        scheme: Scheme,
        k_sq: float = 0.5,
        p: int = 0,
        line_step: float = 0.05,
    ):
        self.h = h
        self.scheme = Scheme(scheme)
        self.k_sq = k_sq
        self.p = p
        self.line_step = line_step
        self._loci: Dict[int, Tuple[LocusPoint, ...]] = {}
        self._rows: Dict[int, RowEquation] = {}

    def set_loci(self, row: int, points: Sequence[LocusPoint]) -> None:
        if row in self._loci:
            raise DomainError("loci of a row are written once", data={"row": row})
        self._loci[row] = tuple(points)

    def loci(self, row: int) -> Tuple[LocusPoint, ...]:
        if row not in self._loci:
            self.set_loci(row, build_locus_family(self.h, self.scheme, row, self.k_sq, self.p, self.line_step))
        return self._loci[row]

    def row_equation(self, row: int) -> RowEquation:
        if row not in self._rows:
            self._rows[row] = build_row_equation(self.scheme, row, self.h, self.loci(row))
        return self._rows[row]

    def prefetch(self, rows: Iterable[int], jobs: int = 1) -> Dict[int, ErrorReport]:
        """并行求各行的点; 返回失败的行"""
        pending = sorted({int(r) for r in rows if int(r) not in self._loci})
        args = [(self.h, self.scheme, row, self.k_sq, self.p, self.line_step) for row in pending]
        if jobs <= 1 or len(args) <= 1:
            results = [_locus_job(a) for a in args]
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_locus_job, args))

        failed: Dict[int, ErrorReport] = {}
        for row, points, report in results:
            if points is not None:
                self.set_loci(row, points)
            else:
                failed[row] = report
        return failed


# 家族
# ------------------------------------------------------------------------------
def simple_pairs(m_range: Iterable[int], n_range: Iterable[int]) -> List[Tuple[int, int]]:
    """m ∈ m_range, n ∈ n_range 的无序非对角对, 按 (min, max) 排序"""
    pairs = {tuple(sorted((int(m), int(n)))) for m in m_range for n in n_range if m != n}
    return sorted(pairs)  # type: ignore[arg-type]


def cyclic_cell_pairs(cells: Iterable[int]) -> List[Tuple[int, int]]:
    """所列各格全部行之间的无序对 (含格内与格间)"""
    rows = sorted({4 * int(c) + q for c in cells for q in (1, 2, 3, 4)})
    return list(combinations(rows, 2))


@log_timing(message="Family generated")
def generate_family(
    scheme: Scheme,
    pairs: Sequence[Tuple[int, int]],
    h: HybridConstants,
    model: Optional[LadderModel] = None,
    k_sq: float = 0.5,
    p: int = 0,
    line_step: float = 0.05,
    jobs: int = 1,
    context: Optional[FamilyContext] = None,
) -> FamilyResult:
    """对每一对求点, 建行方程并杂交; 单个对的失败记入 failures"""
    if model is not None:
        mother = verify_mother(h, model)
        if mother > ROW_TOL * h.c4:
            logger.warning("Hybrid constants fail the mother formula", extra={"data": {"residual": mother}})
    context = context or FamilyContext(h, scheme, k_sq, p, line_step)
    result = FamilyResult()

    for a, b in pairs:
        if a == b:
            result.failures.append(DomainError("rows of a pair must differ", data={"pair": [a, b]}).report())
    valid = [(int(a), int(b)) for a, b in pairs if a != b]
    failed_rows = context.prefetch({r for pair in valid for r in pair}, jobs=jobs)

    for a, b in valid:
        missing = [r for r in (a, b) if r in failed_rows]
        if missing:
            report = failed_rows[missing[0]]
            result.failures.append(replace(report, data={**report.data, "pair": [a, b]}))
            continue
        try:
            meta = crossbreed(context.row_equation(a), context.row_equation(b))
        except BaseError as exc:
            exc.data.setdefault("pair", [a, b])
            result.failures.append(exc.report())
            continue
        if meta.residual > META_TOL:
            result.failures.append(
                AccuracyError(
                    "meta-functional equation residual exceeds tolerance",
                    data={"pair": [a, b], "residual": meta.residual, "tol": META_TOL},
                ).report()
            )
        result.equations.append(meta)

    logger.info(
        "Crossbreeding finished",
        extra={
            "data": {
                "scheme": Scheme(scheme).value,
                "pairs": len(pairs),
                "equations": len(result.equations),
                "failures": len(result.failures),
            }
        },
    )
    return result


# K / G
# ------------------------------------------------------------------------------
def _pair_terms(row_a: int, row_b: int, context: FamilyContext) -> Tuple[Tuple[Term, Term], Tuple[Term, Term]]:
    return _terms(context.row_equation(row_a), context.row_equation(row_b))


def k_value(m: int, n: int, context: FamilyContext) -> float:
    """K(m, n) = |ζ(m s₁ᵐ)||Γ(m s₂ᵐ)||cn(n s₃ⁿ)| + |J_p(n s₄ⁿ)||cn(m s₃ᵐ)|"""
    if context.scheme is not Scheme.SIMPLE:
        raise DomainError("K(m, n) is defined on the simple scheme", data={"scheme": context.scheme.value})
    return evaluate_terms(_pair_terms(m, n, context)[0])


def g_value(row_a: int, row_b: int, context: FamilyContext) -> float:
    """G(a, b): 同余数 Cyclic 行上与 K 同型的组合"""
    if context.scheme is not Scheme.CYCLIC:
        raise DomainError("G is defined on the cyclic scheme", data={"scheme": context.scheme.value})
    if residue(row_a) != residue(row_b):
        raise ResidueMismatchError(data={"rows": [row_a, row_b], "residues": [residue(row_a), residue(row_b)]})
    return evaluate_terms(_pair_terms(row_a, row_b, context)[0])


def _provenance_ok(terms: Iterable[Term]) -> bool:
    for term in terms:
        for factor in term:
            fresh = factor.evaluate()
            drift = max(relative_residual(fresh, factor.achieved), relative_residual(fresh, factor.target_c))
            if drift > PROVENANCE_TOL:
                return False
    return True


def check_symmetry(
    kind: SymmetryKind,
    grid: Iterable[Tuple[int, int]],
    context: FamilyContext,
    tol: float = SYMMETRY_TOL,
) -> SymmetryReport:
    """对每一对比较两种次序的值与项结构; 失败写入报告"""
    kind = SymmetryKind(kind)
    value = k_value if kind is SymmetryKind.K else g_value
    report = SymmetryReport(kind=kind, tol=tol)
    for a, b in grid:
        entry = SymmetryEntry(pair=(int(a), int(b)))
        try:
            entry.forward = value(a, b, context)
            entry.backward = value(b, a, context)
            entry.deviation = relative_residual(entry.forward, entry.backward)
            entry.numeric = entry.deviation <= tol
            forward_terms = _pair_terms(a, b, context)[0]
            backward_terms = _pair_terms(b, a, context)[0]
            entry.structural = factor_signature(forward_terms) == factor_signature(backward_terms)
            entry.provenance = _provenance_ok(forward_terms + backward_terms)
        except BaseError as exc:
            entry.error = exc.report()
        report.entries.append(entry)

    logger.info(
        "Symmetry checked",
        extra={
            "data": {
                "kind": kind.value,
                "pairs": len(report.entries),
                "max_deviation": report.max_deviation,
                "failures": len(report.failures),
            }
        },
    )
    return report


# 残差表
# ------------------------------------------------------------------------------
def residual_frame(equations: Sequence[MetaEquation]) -> pd.DataFrame:
    records = [
        {
            "scheme": Scheme(meta.scheme).value,
            "row_a": meta.rows[0],
            "row_b": meta.rows[1],
            "class_label": meta.pair_class.label,
            "interaction": meta.pair_class.interaction,
            "lhs": meta.lhs_value,
            "rhs": meta.rhs_value,
            "residual": meta.residual,
        }
        for meta in equations
    ]
    return pd.DataFrame.from_records(records, columns=RESIDUAL_COLUMNS)


def write_residual_csv(equations: Sequence[MetaEquation], path) -> None:
    residual_frame(equations).to_csv(path, index=False, lineterminator="\n")
