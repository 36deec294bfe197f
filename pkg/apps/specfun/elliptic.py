"""
Jacobi 椭圆函数 cn, sn, dn (复自变量)

先用半周期 2K 与 2iK′ 把 u 约化到 |Re u| ≤ K, |Im u| ≤ K′, 再用 θ 函数商:
    cn(u) = θ₄(0)/θ₂(0) · θ₂(v)/θ₄(v)
    sn(u) = θ₃(0)/θ₂(0) · θ₁(v)/θ₄(v)
    dn(u) = θ₄(0)/θ₃(0) · θ₃(v)/θ₄(v),   v = πu / (2K), q = exp(−πK′/K)
约化后极点只可能在 ±iK′。
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.special import ellipk

from apps.core.exceptions import DomainError, PoleError

from .types import POLE_RADIUS, ComplexValue, Number, as_complex

# 已验证范围: |Im u| ≤ 5 个虚周期 (4K′)
IMAG_PERIODS = 5
MAX_REAL_PERIODS = 1.0e5


@dataclass(frozen=True)
class _Nome:
    k_sq: float
    K: float
    K_prime: float
    log_q: float
    terms: int
    theta2_0: float
    theta3_0: float
    theta4_0: float


def _check_modulus(k_sq: float) -> None:
    if not 0.0 < k_sq < 1.0:
        raise DomainError("k_sq must lie strictly inside (0, 1)", data={"k_sq": k_sq})


def quarter_periods(k_sq: float) -> Tuple[float, float]:
    """(K, K′)"""
    nome = _nome(float(k_sq))
    return nome.K, nome.K_prime


@lru_cache(maxsize=64)
def _nome(k_sq: float) -> _Nome:
    _check_modulus(k_sq)
    K = float(ellipk(k_sq))
    K_prime = float(ellipk(1.0 - k_sq))
    log_q = -math.pi * K_prime / K
    # 约化后 |Im v| ≤ πK′/(2K), 项的量级约 exp(−πK′/K · (n² − n))
    terms = min(200, int(math.ceil(math.sqrt(45.0 / (math.pi * K_prime / K)))) + 3)
    t1, t2, t3, t4 = _thetas(0j, log_q, terms)
    return _Nome(k_sq, K, K_prime, log_q, terms, t2.real, t3.real, t4.real)


def _thetas(v: complex, log_q: float, terms: int) -> Tuple[complex, complex, complex, complex]:
    n = np.arange(terms, dtype=float)
    half = np.exp(log_q * (n + 0.5) ** 2)
    alternating = np.where(n % 2 == 0, 1.0, -1.0)
    odd = (2.0 * n + 1.0) * v
    theta1 = 2.0 * np.sum(alternating * half * np.sin(odd))
    theta2 = 2.0 * np.sum(half * np.cos(odd))
    m = n[1:]
    whole = np.exp(log_q * m * m)
    even = np.cos(2.0 * m * v)
    theta3 = 1.0 + 2.0 * np.sum(whole * even)
    theta4 = 1.0 + 2.0 * np.sum(np.where(m % 2 == 0, 1.0, -1.0) * whole * even)
    return complex(theta1), complex(theta2), complex(theta3), complex(theta4)


def _reduce(u: complex, nome: _Nome) -> Tuple[complex, int, int]:
    """约化到基本矩形, 返回 (u₀, 2K 平移次数, 2iK′ 平移次数)"""
    if abs(u.imag) > 4.0 * IMAG_PERIODS * nome.K_prime or abs(u.real) > MAX_REAL_PERIODS * nome.K:
        raise DomainError(
            "elliptic argument outside the validated range",
            data={"s": [u.real, u.imag], "k_sq": nome.k_sq},
        )
    shifts_imag = int(round(u.imag / (2.0 * nome.K_prime)))
    u = u - 2j * nome.K_prime * shifts_imag
    shifts_real = int(round(u.real / (2.0 * nome.K)))
    u = u - 2.0 * nome.K * shifts_real
    pole_distance = min(abs(u - 1j * nome.K_prime), abs(u + 1j * nome.K_prime))
    if pole_distance < POLE_RADIUS:
        raise PoleError(
            "argument on the pole lattice of the Jacobi functions",
            data={"k_sq": nome.k_sq, "distance": pole_distance},
        )
    return u, shifts_real, shifts_imag


def jacobi_complex(s: Number, k_sq: float) -> Tuple[complex, complex, complex]:
    """(sn, cn, dn)"""
    nome = _nome(float(k_sq))
    u, shifts_real, shifts_imag = _reduce(as_complex(s), nome)
    v = math.pi * u / (2.0 * nome.K)
    theta1, theta2, theta3, theta4 = _thetas(v, nome.log_q, nome.terms)
    sn = nome.theta3_0 / nome.theta2_0 * theta1 / theta4
    cn = nome.theta4_0 / nome.theta2_0 * theta2 / theta4
    dn = nome.theta4_0 / nome.theta3_0 * theta3 / theta4
    # sn: 2K 变号; cn: 2K 与 2iK′ 均变号; dn: 2iK′ 变号
    sn *= (-1) ** (shifts_real % 2)
    cn *= (-1) ** ((shifts_real + shifts_imag) % 2)
    dn *= (-1) ** (shifts_imag % 2)
    return sn, cn, dn


def _finish(value: complex, s: Number) -> ComplexValue:
    if as_complex(s).imag == 0.0:
        value = complex(value.real, 0.0)
    return ComplexValue.from_complex(value)


def eval_cn(s: Number, k_sq: float) -> ComplexValue:
    """求 cn(s, k)"""
    return _finish(jacobi_complex(s, k_sq)[1], s)


def eval_sn(s: Number, k_sq: float) -> ComplexValue:
    """求 sn(s, k)"""
    return _finish(jacobi_complex(s, k_sq)[0], s)


def eval_dn(s: Number, k_sq: float) -> ComplexValue:
    """求 dn(s, k)"""
    return _finish(jacobi_complex(s, k_sq)[2], s)
