"""
统一的模值分派: |F(ns)|
"""
import logging
from typing import Callable, Dict

from apps.core.exceptions import DomainError, OverflowFlagError, PoleError

from .bessel import eval_bessel_j
from .elliptic import eval_cn
from .gamma import eval_gamma
from .types import ComplexValue, FunctionKind, FunctionTag, Number, ValueFlag, as_complex
from .zeta import eval_zeta

logger = logging.getLogger(__name__)


def _evaluators() -> Dict[FunctionKind, Callable[[FunctionTag, complex], ComplexValue]]:
    return {
        FunctionKind.ZETA: lambda tag, w: eval_zeta(w),
        FunctionKind.GAMMA: lambda tag, w: eval_gamma(w),
        FunctionKind.JACOBI_CN: lambda tag, w: eval_cn(w, tag.k_sq),  # type: ignore[arg-type]
        FunctionKind.BESSEL_J: lambda tag, w: eval_bessel_j(tag.p, w),  # type: ignore[arg-type]
    }


def eval_value(tag: FunctionTag, n: int, s: Number) -> ComplexValue:
    """F(ns)"""
    if int(n) != n or n < 1:
        raise DomainError("multiplier n must be a positive integer", data={"n": n})
    w = int(n) * as_complex(s)
    return _evaluators()[tag.kind](tag, w)


def eval_abs(tag: FunctionTag, n: int, s: Number) -> float:
    """|F(ns)|; 极点与溢出抛错, INACCURATE 值照常返回并记录警告"""
    value = eval_value(tag, n, s)
    if value.flag is ValueFlag.POLE:
        raise PoleError(f"{tag.label} evaluated at a pole", data={"n": n, "s": [value.re, value.im]})
    if value.flag is ValueFlag.OVERFLOW:
        raise OverflowFlagError(f"{tag.label} overflows at n*s", data={"n": n, "s": repr(s)})
    if value.flag is ValueFlag.INACCURATE:
        logger.warning("Inaccurate special-function value", extra={"data": {"tag": tag.label, "n": n, "s": repr(s)}})
    return abs(value)
