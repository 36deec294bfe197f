"""
复 Gamma 函数

Re s ≥ ½ 用 Lanczos 近似 (g = 7, 9 项), Re s < ½ 用反射公式
Γ(s)Γ(1−s) = π / sin(πs)。全程在对数域计算, 以便在 |Γ| 超出
双精度范围时给出 OVERFLOW 标记而不是 inf。
"""
import cmath
import math

from apps.core.exceptions import DomainError, PoleError

from .types import POLE_RADIUS, ComplexValue, Number, ValueFlag, as_complex

LANCZOS_G = 7.0
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# 已验证范围
# |s| ≤ 170 为精度验证范围; 之外到 200 只用于给出溢出标记
MAX_ABS_ARGUMENT = 200.0
LOG_MAX_FLOAT = math.log(1.7976931348623157e308)
HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_log_gamma(z: complex) -> complex:
    """ln Γ(z), Re z ≥ ½"""
    z -= 1.0
    x = complex(LANCZOS_COEFFICIENTS[0])
    for i, coefficient in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        x += coefficient / (z + i)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_TWO_PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _check_pole(z: complex) -> None:
    if z.real > 0.5:
        return
    nearest = round(z.real)
    if nearest <= 0 and abs(z - nearest) < POLE_RADIUS:
        raise PoleError(f"Gamma has a pole at {nearest}", data={"s": [z.real, z.imag], "pole": nearest})


def log_gamma(s: Number) -> complex:
    """ln Γ(s) (虚部的分支不做归一化)"""
    z = as_complex(s)
    if abs(z) > MAX_ABS_ARGUMENT:
        raise DomainError("Gamma argument outside |s| <= 200", data={"s": [z.real, z.imag]})
    _check_pole(z)
    if z.real >= 0.5:
        return _lanczos_log_gamma(z)
    # 反射公式
    return math.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - _lanczos_log_gamma(1.0 - z)


def gamma_complex(s: Number) -> complex:
    """Γ(s) 的原始 complex 值; 溢出时抛 OverflowError"""
    log_value = log_gamma(s)
    if log_value.real > LOG_MAX_FLOAT:
        raise OverflowError("Gamma overflows double precision")
    value = cmath.exp(log_value)
    z = as_complex(s)
    # 实轴上消除分支带来的虚部噪声
    if z.imag == 0.0:
        value = complex(value.real, 0.0)
    return value


def eval_gamma(s: Number) -> ComplexValue:
    """求 Γ(s); |Γ| 超出双精度范围时返回 OVERFLOW 标记"""
    try:
        return ComplexValue.from_complex(gamma_complex(s))
    except OverflowError:
        return ComplexValue(math.inf, 0.0, ValueFlag.OVERFLOW)
