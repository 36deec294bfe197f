"""
水平集 |F(ns)| = c 上的点

LineScan: 自下而上逐条水平线, 每条线上从左到右采样, 找到 |F| − c 的第一个变号
(或恰好为零的采样点), 用 brentq 细化; 极点处的采样记为 NaN, 不参与变号判断。
Continuation: 以 LineScan 的点为起点沿水平集走固定步数。

沿曲线的延拓对 g(s) = ln|F(ns)| − ln c 做预测-校正:
切向 (−g_y, g_x) 用中心差分求梯度, 校正沿梯度方向做 Newton 迭代。
"""
import logging
import math
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from apps.core.exceptions import (
    LocusNotFoundError,
    OverflowFlagError,
    PoleError,
    PoleProximityError,
    StepFailureError,
)
from apps.crossbreed.assignment import make_tag, residue, row_assignment
from apps.hybrid.types import HybridConstants
from apps.specfun.dispatch import eval_abs
from apps.specfun.types import ComplexValue, FunctionTag

from .regions import default_regions
from .types import LocusPoint, LocusRequest, Region, Scheme, SearchId, SearchStrategy, TraceResult

logger = logging.getLogger(__name__)

MIN_LINE_SAMPLES = 40
ROOT_XTOL = 1e-13
GRADIENT_STEP = 1e-6
MAX_HALVINGS = 5
MAX_STEP_LEN = 0.1
# |∇ ln|F|| 超过此值视为接近零点或极点
SINGULAR_GRADIENT = 1e4
CONTINUATION_STEPS = 8
CSV_COLUMNS = ["tag", "n", "c", "re", "im", "achieved"]


def _safe_abs(tag: FunctionTag, n: int, s: complex) -> float:
    try:
        return eval_abs(tag, n, s)
    except (PoleError, OverflowFlagError):
        return math.nan


def _lines(region: Region, line_step: float) -> Iterator[Tuple[int, float, np.ndarray]]:
    step = min(line_step, region.width / MIN_LINE_SAMPLES)
    columns = int(math.ceil(region.width / step)) + 1
    xs = np.linspace(region.re_min, region.re_max, columns)
    rows = int(math.ceil(region.height / step)) + 1 if region.height > 0 else 1
    for index, y in enumerate(np.linspace(region.im_min, region.im_max, rows)):
        yield index, float(y), xs


def validate_point(point: LocusPoint, tol: float = 1e-10) -> bool:
    """重新求值并检查 |F(ns)| = c"""
    try:
        fresh = eval_abs(point.tag, point.n, point.s)
    except (PoleError, OverflowFlagError):
        return False
    return math.isfinite(fresh) and fresh > 0.0 and abs(fresh - point.target_c) <= tol * point.target_c


def _accept(req: LocusRequest, s: complex, search_id: Union[SearchId, str]) -> Optional[LocusPoint]:
    achieved = _safe_abs(req.tag, req.n, s)
    if not (math.isfinite(achieved) and achieved > 0.0):
        return None
    if abs(achieved - req.target_c) > req.tol * req.target_c:
        return None
    return LocusPoint(req.tag, int(req.n), req.target_c, ComplexValue.from_complex(s), achieved, str(search_id))


def _scan_region(req: LocusRequest, region: Region, region_index: int) -> Optional[LocusPoint]:
    c = req.target_c
    for line, y, xs in _lines(region, req.line_step):
        excess = np.array([_safe_abs(req.tag, req.n, complex(x, y)) for x in xs]) - c
        for cell in range(xs.size):
            search_id = SearchId(req.strategy, region.as_tuple(), region_index, line, cell)
            if excess[cell] == 0.0:
                point = _accept(req, complex(xs[cell], y), search_id)
                if point is not None:
                    return point
            if cell + 1 == xs.size or not (excess[cell] * excess[cell + 1] < 0.0):
                continue
            x = brentq(
                lambda v: _safe_abs(req.tag, req.n, complex(v, y)) - c,
                xs[cell],
                xs[cell + 1],
                xtol=ROOT_XTOL,
                maxiter=200,
            )
            point = _accept(req, complex(x, y), search_id)
            if point is not None:
                return point
    return None


def _line_scan(req: LocusRequest) -> LocusPoint:
    regions = [req.region] if req.region is not None else default_regions(req.tag, req.n)
    for index, region in enumerate(regions):
        point = _scan_region(req, region, index)
        if point is not None:
            logger.debug(
                "Locus point found",
                extra={"data": {"tag": req.tag.label, "n": req.n, "c": req.target_c, "search_id": point.search_id}},
            )
            return point
    raise LocusNotFoundError(
        f"|{req.tag.label}(n s)| = c not attained in the scanned regions",
        data={
            "tag": req.tag.label,
            "n": req.n,
            "target_c": req.target_c,
            "regions": [region.as_tuple() for region in regions],
            "line_step": req.line_step,
        },
    )


def find_locus_point(req: LocusRequest) -> LocusPoint:
    """按请求求水平集上的一点"""
    seed = _line_scan(req)
    if req.strategy is SearchStrategy.LINE_SCAN:
        return seed
    report = trace_locus_report(seed, CONTINUATION_STEPS, req.line_step)
    last = report.points[-1]
    search_id = f"{seed.search_id}->trace{len(report.points) - 1}"
    return LocusPoint(last.tag, last.n, last.target_c, last.s, last.achieved, search_id)


# 延拓
# ------------------------------------------------------------------------------
def _log_excess(tag: FunctionTag, n: int, s: complex, log_c: float) -> float:
    value = eval_abs(tag, n, s)
    if value <= 0.0:
        raise PoleProximityError("zero of the function on the continuation path", data={"s": [s.real, s.imag]})
    return math.log(value) - log_c


def _gradient(tag: FunctionTag, n: int, s: complex, log_c: float) -> complex:
    h = GRADIENT_STEP
    gx = (_log_excess(tag, n, s + h, log_c) - _log_excess(tag, n, s - h, log_c)) / (2 * h)
    gy = (_log_excess(tag, n, s + 1j * h, log_c) - _log_excess(tag, n, s - 1j * h, log_c)) / (2 * h)
    return complex(gx, gy)


def _correct(tag: FunctionTag, n: int, guess: complex, log_c: float, tol: float) -> Optional[complex]:
    s = guess
    for _ in range(25):
        g = _log_excess(tag, n, s, log_c)
        if abs(g) <= 0.1 * tol:
            return s
        grad = _gradient(tag, n, s, log_c)
        norm_sq = abs(grad) ** 2
        if norm_sq == 0.0:
            return None
        s = s - g * grad / norm_sq
    return None


def trace_locus_report(start: LocusPoint, steps: int, step_len: float, tol: float = 1e-10) -> TraceResult:
    """沿水平集延拓, 返回点列与停止原因"""
    if not 0.0 < step_len <= MAX_STEP_LEN:
        raise StepFailureError("step_len must lie in (0, 0.1]", data={"step_len": step_len})
    tag, n, c = start.tag, start.n, start.target_c
    log_c = math.log(c)
    result = TraceResult(points=[start])
    origin = start.s.value
    current = origin
    previous_tangent: Optional[complex] = None

    for index in range(steps):
        try:
            grad = _gradient(tag, n, current, log_c)
        except (PoleError, OverflowFlagError, PoleProximityError):
            result.stop_reason = "singularity"
            break
        if abs(grad) > SINGULAR_GRADIENT:
            result.stop_reason = "singularity"
            break
        tangent = complex(-grad.imag, grad.real) / abs(grad)
        if previous_tangent is not None and (tangent * previous_tangent.conjugate()).real < 0.0:
            tangent = -tangent

        length = step_len
        accepted: Optional[LocusPoint] = None
        for _ in range(MAX_HALVINGS + 1):
            try:
                corrected = _correct(tag, n, current + length * tangent, log_c, tol)
            except (PoleError, OverflowFlagError, PoleProximityError):
                corrected = None
            if corrected is not None and abs(corrected - current) <= 2.0 * step_len:
                accepted = _accept(
                    LocusRequest(tag, n, c, strategy=SearchStrategy.CONTINUATION, tol=tol),
                    corrected,
                    f"{start.search_id}->trace{index + 1}",
                )
                if accepted is not None:
                    break
            length /= 2.0
        if accepted is None:
            raise StepFailureError(
                "continuation step failed after repeated halving",
                data={"tag": tag.label, "n": n, "c": c, "s": [current.real, current.imag], "step": index + 1},
            )

        result.points.append(accepted)
        previous_tangent = (accepted.s.value - current) / abs(accepted.s.value - current)
        current = accepted.s.value
        if len(result.points) > 3 and abs(current - origin) < step_len:
            result.closed = True
            result.stop_reason = "closed"
            break

    logger.debug(
        "Locus traced",
        extra={"data": {"tag": tag.label, "n": n, "points": len(result.points), "stop": result.stop_reason}},
    )
    return result


def trace_locus(start: LocusPoint, steps: int, step_len: float) -> List[LocusPoint]:
    """沿水平集延拓"""
    return trace_locus_report(start, steps, step_len).points


# 行族
# ------------------------------------------------------------------------------
def family_tags(scheme: Scheme, row: int, k_sq: float = 0.5, p: int = 0) -> Tuple[FunctionTag, ...]:
    """行的四个函数; Simple 固定为 (ζ, Γ, cn, J_p)"""
    q = 1 if Scheme(scheme) is Scheme.SIMPLE else residue(row)
    return tuple(make_tag(kind, k_sq, p) for kind in row_assignment(q))


def build_locus_family(
    h: HybridConstants,
    scheme: Scheme,
    row: int,
    k_sq: float = 0.5,
    p: int = 0,
    line_step: float = 0.05,
) -> Tuple[LocusPoint, ...]:
    """第 row 行的四个点, 目标依次为 c₁..c₄"""
    residue(row)
    points = []
    for slot, (tag, target) in enumerate(zip(family_tags(scheme, row, k_sq, p), h.constants), start=1):
        request = LocusRequest(tag, int(row), target, line_step=line_step)
        try:
            points.append(find_locus_point(request))
        except LocusNotFoundError as exc:
            exc.data.update({"slot": slot, "row": row, "scheme": Scheme(scheme).value})
            raise
    return tuple(points)


# CSV
# ------------------------------------------------------------------------------
def locus_frame(points: Sequence[LocusPoint]) -> pd.DataFrame:
    """列为 (tag, n, c, re, im, achieved)"""
    records = [
        {"tag": p.tag.label, "n": p.n, "c": p.target_c, "re": p.s.re, "im": p.s.im, "achieved": p.achieved}
        for p in points
    ]
    return pd.DataFrame.from_records(records, columns=CSV_COLUMNS)


def write_locus_csv(points: Sequence[LocusPoint], path) -> None:
    locus_frame(points).to_csv(path, index=False, lineterminator="\n")
