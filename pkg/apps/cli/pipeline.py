"""
命令共用的流程: 阶梯模型 → 混合常数 → 水平集 → 杂交 → 复核
"""
import logging
import math
from typing import List, Tuple

from django.conf import settings

from apps.core.exceptions import BaseError
from apps.crossbreed.services import (
    cyclic_cell_pairs,
    evaluate_terms,
    generate_family,
    relative_residual,
    simple_pairs,
)
from apps.crossbreed.types import FamilyResult, Term
from apps.hybrid.services import compute_hybrid_constants
from apps.hybrid.types import HybridConstants
from apps.ladder.services import LadderModel, ladder_diagnostics
from apps.ladder.types import LadderDiagnostic
from apps.levelset.services import build_locus_family, trace_locus
from apps.levelset.types import LocusPoint, Scheme

from .config import RunConfig
from .schemas import (
    EquationSchema,
    ErrorReportSchema,
    GenerateArtifact,
    HybridSchema,
    VerifyEntry,
    VerifyReport,
)

logger = logging.getLogger(__name__)


def _setting(name: str, default):
    return getattr(settings, "CROSSBREED", {}).get(name, default)


def build_model(config: RunConfig, T: float) -> LadderModel:
    """覆盖到 T 的逆迭代的阶梯模型"""
    return LadderModel.covering(T, omega_variant=config.omega)


def hybrid_stage(config: RunConfig) -> Tuple[HybridConstants, LadderModel]:
    model = build_model(config, math.pi * config.L + config.U)
    h = compute_hybrid_constants(config.L, config.U, model, L0=int(_setting("L0", 30)))
    return h, model


def levelset_stage(config: RunConfig) -> List[LocusPoint]:
    """第 row 行的四个点; trace > 0 时改为从第 slot 个点出发的折线"""
    h, _ = hybrid_stage(config)
    points = build_locus_family(h, config.scheme, config.row, config.k_sq, config.p, float(_setting("LINE_STEP", 0.05)))
    if config.trace:
        return trace_locus(points[config.slot - 1], config.trace - 1, config.step)
    return list(points)


def family_pairs(config: RunConfig) -> List[Tuple[int, int]]:
    if config.scheme is Scheme.SIMPLE:
        return simple_pairs(config.m_range, config.n_range)
    return cyclic_cell_pairs(config.cell_list)


def generate_stage(config: RunConfig) -> Tuple[HybridConstants, FamilyResult]:
    h, model = hybrid_stage(config)
    result = generate_family(
        config.scheme,
        family_pairs(config),
        h,
        model,
        k_sq=config.k_sq,
        p=config.p,
        line_step=float(_setting("LINE_STEP", 0.05)),
        jobs=config.jobs,
    )
    return h, result


def generate_artifact(config: RunConfig, h: HybridConstants, result: FamilyResult) -> GenerateArtifact:
    return GenerateArtifact(
        config=config.artifact_dict(),
        hybrid=HybridSchema.from_constants(h),
        equations=[EquationSchema.from_meta(meta) for meta in result.equations],
        failures=[ErrorReportSchema.from_report(report) for report in result.failures],
        tolerance=config.tol,
    )


def ladder_stage(config: RunConfig) -> List[LadderDiagnostic]:
    Ls = config.L_list
    model = build_model(config, math.pi * max(Ls) + config.U)
    return ladder_diagnostics(Ls, model, U=config.U)


# 复核
# ------------------------------------------------------------------------------
def _stored_side(terms: Tuple[Term, ...]) -> float:
    return math.fsum(math.prod(f.achieved for f in term) for term in terms)


def _mismatches(terms: Tuple[Term, ...], tol: float) -> List[str]:
    tokens = set()
    for term in terms:
        for factor in term:
            try:
                fresh = factor.evaluate()
            except BaseError:
                tokens.add(factor.token)
                continue
            if relative_residual(fresh, factor.achieved) > tol:
                tokens.add(factor.token)
    return sorted(tokens)


def verify_equation(equation: EquationSchema, tol: float) -> VerifyEntry:
    """从存储的点坐标重新求每个因子与残差"""
    lhs_terms, rhs_terms = equation.lhs_terms(), equation.rhs_terms()
    mismatches = _mismatches(lhs_terms + rhs_terms, tol)
    try:
        residual = relative_residual(evaluate_terms(lhs_terms), evaluate_terms(rhs_terms))
    except BaseError:
        residual = math.inf
    consistent = (
        relative_residual(_stored_side(lhs_terms), equation.lhs_value) <= tol
        and relative_residual(_stored_side(rhs_terms), equation.rhs_value) <= tol
    )
    return VerifyEntry(
        rows=equation.rows,
        class_label=equation.class_label,
        residual=residual,
        stored_residual=equation.residual,
        factor_mismatches=mismatches,
        stored_sides_consistent=consistent,
        passed=residual <= tol and not mismatches and consistent,
    )


def verify_artifact(artifact: GenerateArtifact) -> VerifyReport:
    tol = artifact.tolerance
    entries = [verify_equation(equation, tol) for equation in artifact.equations]
    hybrid_residual = artifact.hybrid.relative_residual
    report = VerifyReport(
        tolerance=tol,
        hybrid_residual=hybrid_residual,
        hybrid_passed=hybrid_residual <= tol,
        max_residual=max((e.residual for e in entries), default=0.0),
        entries=entries,
        passed=hybrid_residual <= tol and all(e.passed for e in entries),
    )
    logger.info(
        "Artifact verified",
        extra={"data": {"equations": len(entries), "passed": report.passed, "max_residual": report.max_residual}},
    )
    return report
