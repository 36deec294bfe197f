"""
整数阶 Bessel 函数 J_p(s), 复自变量

|s| ≤ 12: 幂级数; |s| > 12: Hankel 渐近展开求 J₀, J₁, 再向上递推到 p
(p < |s| 时递推稳定), p ≥ |s| 时仍用幂级数并估计抵消误差。
"""
import cmath
import math
from typing import Tuple

from apps.core.exceptions import DomainError

from .types import ComplexValue, Number, ValueFlag, as_complex

SERIES_RADIUS = 12.0
MAX_ABS_ARGUMENT = 100.0
MAX_ORDER = 50
DEFAULT_TOL = 1e-10
_EPS = 2.220446049250313e-16


def _series(p: int, z: complex) -> Tuple[complex, float]:
    """幂级数, 返回 (值, 相对误差估计)"""
    half = z / 2.0
    term = half**p / math.factorial(p)
    total = term
    magnitude = abs(term)
    quarter = -(half * half)
    k = 0
    while True:
        k += 1
        term = term * quarter / (k * (k + p))
        total += term
        magnitude += abs(term)
        if abs(term) <= _EPS * abs(total) and k > abs(half):
            break
        if k > 500:
            break
    if total == 0:
        return total, 0.0 if magnitude == 0 else math.inf
    return total, _EPS * magnitude / abs(total)


def _hankel(order: int, z: complex) -> complex:
    """Hankel 渐近展开, Re z ≥ 0, |z| > 12"""
    mu = 4.0 * order * order
    big_p = complex(1.0)
    big_q = complex(0.0)
    term = complex(1.0)
    previous = math.inf
    for k in range(1, 200):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        size = abs(term)
        if size > previous or size < _EPS * 1e-2:
            break
        previous = size
        # a_k 的符号: P 取偶数项 (−1)^{k/2}, Q 取奇数项 (−1)^{(k−1)/2}
        if k % 2 == 0:
            big_p += (-1) ** (k // 2) * term
        else:
            big_q += (-1) ** ((k - 1) // 2) * term
    chi = z - order * math.pi / 2.0 - math.pi / 4.0
    return cmath.sqrt(2.0 / (math.pi * z)) * (big_p * cmath.cos(chi) - big_q * cmath.sin(chi))


def bessel_j_complex(p: int, s: Number, tol: float = DEFAULT_TOL) -> Tuple[complex, bool]:
    """J_p(s) 的原始值与精度是否达标"""
    if int(p) != p:
        raise DomainError("Bessel order must be an integer", data={"p": p})
    p = int(p)
    z = as_complex(s)
    if abs(z) > MAX_ABS_ARGUMENT or abs(p) > MAX_ORDER:
        raise DomainError(
            "Bessel argument outside the validated range",
            data={"s": [z.real, z.imag], "p": p, "max_abs": MAX_ABS_ARGUMENT, "max_order": MAX_ORDER},
        )
    # J_{−p} = (−1)^p J_p
    order = abs(p)
    sign = -1.0 if (p < 0 and order % 2 == 1) else 1.0

    if z == 0:
        return complex(sign * (1.0 if order == 0 else 0.0)), True

    if abs(z) <= SERIES_RADIUS or order >= abs(z):
        value, error = _series(order, z)
        return sign * value, error <= tol

    # J_p(−z) = (−1)^p J_p(z)
    if z.real < 0:
        z = -z
        if order % 2 == 1:
            sign = -sign
    j_prev, j_curr = _hankel(0, z), _hankel(1, z)
    if order == 0:
        return sign * j_prev, True
    for n in range(1, order):
        j_prev, j_curr = j_curr, (2.0 * n / z) * j_curr - j_prev
    return sign * j_curr, True


def eval_bessel_j(p: int, s: Number, tol: float = DEFAULT_TOL) -> ComplexValue:
    """求 J_p(s); 达不到 tol 时带 INACCURATE 标记"""
    z = as_complex(s)
    value, accurate = bessel_j_complex(p, z, tol)
    if z.imag == 0.0:
        value = complex(value.real, 0.0)
    return ComplexValue.from_complex(value, ValueFlag.OK if accurate else ValueFlag.INACCURATE)
