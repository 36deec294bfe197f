"""
Riemann ζ 函数

* 一般复数 s: Euler–Maclaurin 求和 (numpy 向量化), Re s < 0 时走函数方程;
* 临界线 ½ + it: t ≥ RS_THRESHOLD 用带前四个修正项的 Riemann–Siegel 公式,
  其下用 Euler–Maclaurin。

Riemann–Siegel 修正项中的 Ψ(p) = cos(2π(p² − p − 1/16)) / cos(2πp) 是整函数,
令 z = 1 − 2p 得 Ψ = −cos(πz²/2 − 5π/8) / cos(πz)。它的 Taylor 系数在导入时
由圆周采样 + FFT 求出, 导数用 numpy.polynomial 求值。
"""
import math
from functools import lru_cache
from typing import Iterator, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import bernoulli, factorial

from apps.core.exceptions import DomainError, PoleError

from .gamma import log_gamma
from .types import POLE_RADIUS, ComplexValue, Number, as_complex

TWO_PI = 2.0 * math.pi

# Euler–Maclaurin 修正项个数
EM_TERMS = 15
# 临界线上 Riemann–Siegel 与 Euler–Maclaurin 的切换点
RS_THRESHOLD = 1000.0
# 已验证范围
MAX_IMAG = 1.0e3
MIN_REAL = -30.0
MAX_CRITICAL_T = 1.0e6
# 单块矩阵元素上限
_CHUNK_ELEMENTS = 2_000_000


def _row_chunks(rows: int, cols: int) -> Iterator[slice]:
    step = max(1, _CHUNK_ELEMENTS // max(cols, 1))
    for start in range(0, rows, step):
        yield slice(start, min(rows, start + step))


@lru_cache(maxsize=1)
def _em_coefficients() -> np.ndarray:
    """B_{2k} / (2k)!, k = 1..EM_TERMS"""
    b = bernoulli(2 * EM_TERMS)
    k = np.arange(1, EM_TERMS + 1)
    return b[2 * k] / factorial(2 * k, exact=False)


def zeta_em_array(s: np.ndarray) -> np.ndarray:
    """Euler–Maclaurin 求 ζ(s), 逐元素; 要求 Re s ≥ 0 且 s ≠ 1"""
    s = np.asarray(s, dtype=complex).ravel()
    out = np.empty_like(s)
    if s.size == 0:
        return out
    coefficients = _em_coefficients()
    n_cut = int(math.ceil(float(np.max(np.abs(s))))) + 2 * EM_TERMS + 10
    log_n = np.log(np.arange(1, n_cut, dtype=float))
    log_cut = math.log(n_cut)

    for rows in _row_chunks(s.size, log_n.size):
        sc = s[rows]
        head = np.exp(-np.outer(sc, log_n)).sum(axis=1)
        cut_pow = np.exp(-sc * log_cut)  # N^{-s}
        tail = n_cut * cut_pow / (sc - 1.0) + 0.5 * cut_pow
        poch = sc.copy()
        scale = cut_pow / n_cut  # N^{-s-1}
        for k, coefficient in enumerate(coefficients, start=1):
            if k > 1:
                poch = poch * (sc + 2 * k - 3) * (sc + 2 * k - 2)
                scale = scale / (n_cut * n_cut)
            tail = tail + coefficient * poch * scale
        out[rows] = head + tail
    return out


def _validate_zeta_argument(z: complex) -> None:
    if abs(z - 1.0) < POLE_RADIUS:
        raise PoleError("zeta has a pole at s = 1", data={"s": [z.real, z.imag]})
    if abs(z.imag) > MAX_IMAG or z.real < MIN_REAL:
        raise DomainError(
            "zeta argument outside the validated range",
            data={"s": [z.real, z.imag], "max_imag": MAX_IMAG, "min_real": MIN_REAL},
        )


def zeta_complex(s: Number) -> complex:
    """ζ(s) 的原始 complex 值"""
    z = as_complex(s)
    _validate_zeta_argument(z)
    if z.real >= 0.0:
        return complex(zeta_em_array(np.array([z]))[0])
    # 函数方程 ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
    w = 1.0 - z
    log_factor = z * math.log(2.0) + (z - 1.0) * math.log(math.pi) + log_gamma(w)
    reflected = complex(zeta_em_array(np.array([w]))[0])
    return complex(np.exp(log_factor) * np.sin(math.pi * z / 2.0) * reflected)


def eval_zeta(s: Number) -> ComplexValue:
    """求 ζ(s)"""
    z = as_complex(s)
    value = zeta_complex(z)
    if z.imag == 0.0:
        value = complex(value.real, 0.0)
    return ComplexValue.from_complex(value)


# Riemann–Siegel
# ------------------------------------------------------------------------------
_PSI_SAMPLES = 64
_PSI_RADIUS = 2.0
_PSI_DEGREE = 48


def _psi_of_z(z: np.ndarray) -> np.ndarray:
    return -np.cos(np.pi * z * z / 2.0 - 5.0 * np.pi / 8.0) / np.cos(np.pi * z)


@lru_cache(maxsize=1)
def _psi_derivative_coefficients() -> Tuple[np.ndarray, ...]:
    """Ψ 关于 p 的 0..12 阶导数, 以 z = 1 − 2p 的多项式系数表示"""
    nodes = _PSI_RADIUS * np.exp(2j * np.pi * np.arange(_PSI_SAMPLES) / _PSI_SAMPLES)
    taylor = np.fft.fft(_psi_of_z(nodes)) / _PSI_SAMPLES
    taylor = (taylor / _PSI_RADIUS ** np.arange(_PSI_SAMPLES)).real[: _PSI_DEGREE + 1]
    derivatives = [taylor]
    for _ in range(12):
        # d/dp = −2 d/dz
        derivatives.append(-2.0 * P.polyder(derivatives[-1]))
    return tuple(derivatives)


def _rs_corrections(p: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Σ_{k=0}^{4} C_k(p) a^{-k}"""
    d = _psi_derivative_coefficients()
    z = 1.0 - 2.0 * p
    psi = {j: P.polyval(z, d[j]) for j in (0, 1, 2, 3, 4, 5, 6, 8, 9, 12)}
    pi2, pi4, pi6, pi8 = np.pi**2, np.pi**4, np.pi**6, np.pi**8
    c0 = psi[0]
    c1 = -psi[3] / (96.0 * pi2)
    c2 = psi[2] / (64.0 * pi2) + psi[6] / (18432.0 * pi4)
    c3 = -psi[1] / (64.0 * pi2) - psi[5] / (3840.0 * pi4) - psi[9] / (5308416.0 * pi6)
    c4 = (
        psi[0] / (128.0 * pi2)
        + 19.0 * psi[4] / (24576.0 * pi4)
        + 11.0 * psi[8] / (5898240.0 * pi6)
        + psi[12] / (2038431744.0 * pi8)
    )
    inv = 1.0 / a
    return c0 + inv * (c1 + inv * (c2 + inv * (c3 + inv * c4)))


def riemann_siegel_theta(t: np.ndarray) -> np.ndarray:
    """θ(t) 的 Stirling 展开, t ≥ 10"""
    t = np.asarray(t, dtype=float)
    return (
        t / 2.0 * np.log(t / TWO_PI)
        - t / 2.0
        - np.pi / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t**3)
        + 31.0 / (80640.0 * t**5)
        + 127.0 / (430080.0 * t**7)
    )


def _riemann_siegel_z(t: np.ndarray) -> np.ndarray:
    a = np.sqrt(t / TWO_PI)
    n_main = np.floor(a)
    p = a - n_main
    theta = riemann_siegel_theta(t)
    n_max = int(n_main.max())
    n = np.arange(1, n_max + 1, dtype=float)
    log_n, inv_sqrt_n = np.log(n), 1.0 / np.sqrt(n)

    main = np.empty_like(t)
    for rows in _row_chunks(t.size, n.size):
        phase = theta[rows, None] - np.outer(t[rows], log_n)
        mask = n[None, :] <= n_main[rows, None]
        main[rows] = 2.0 * np.where(mask, np.cos(phase) * inv_sqrt_n, 0.0).sum(axis=1)

    sign = np.where(n_main % 2 == 1, 1.0, -1.0)  # (−1)^{N−1}
    return main + sign * a ** (-0.5) * _rs_corrections(p, a)


def hardy_z(t: np.ndarray, rs_threshold: float = RS_THRESHOLD) -> np.ndarray:
    """Hardy Z(t) = e^{iθ(t)} ζ(½ + it), t ≥ 10, 向量化"""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 10.0):
        raise DomainError("hardy_z needs t >= 10", data={"min_t": float(t.min())})
    out = np.empty_like(t)
    high = t >= rs_threshold
    if np.any(high):
        out[high] = _riemann_siegel_z(t[high])
    if np.any(~high):
        low = t[~high]
        zeta = zeta_em_array(0.5 + 1j * low)
        out[~high] = (np.exp(1j * riemann_siegel_theta(low)) * zeta).real
    return out


def zeta_critical_sq_array(t: np.ndarray, rs_threshold: float = RS_THRESHOLD) -> np.ndarray:
    """|ζ(½ + it)|², 向量化"""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0.0):
        raise DomainError("critical-line ordinate must be non-negative", data={"min_t": float(t.min())})
    if np.any(t > MAX_CRITICAL_T):
        raise DomainError("critical-line ordinate outside t <= 1e6", data={"max_t": float(t.max())})
    out = np.empty_like(t)
    high = t >= rs_threshold
    if np.any(high):
        out[high] = _riemann_siegel_z(t[high]) ** 2
    if np.any(~high):
        out[~high] = np.abs(zeta_em_array(0.5 + 1j * t[~high])) ** 2
    return out


def eval_zeta_critical_sq(t: float, rs_threshold: float = RS_THRESHOLD) -> float:
    """|ζ(½ + it)|²"""
    if not math.isfinite(t):
        raise DomainError("ordinate must be finite")
    return float(zeta_critical_sq_array(np.array([t]), rs_threshold)[0])
