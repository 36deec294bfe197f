import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from apps.core.exceptions import DomainError

# 极点邻域半径
POLE_RADIUS = 1e-8


class ValueFlag(str, Enum):
    """求值标记"""

    OK = "ok"
    POLE = "pole"
    OVERFLOW = "overflow"
    INACCURATE = "inaccurate"


@dataclass(frozen=True)
class ComplexValue:
    """复数值; 非有限分量必须带标记"""

    re: float
    im: float
    flag: ValueFlag = ValueFlag.OK

    def __post_init__(self) -> None:
        finite = math.isfinite(self.re) and math.isfinite(self.im)
        if not finite and self.flag in (ValueFlag.OK, ValueFlag.INACCURATE):
            raise DomainError("non-finite component without pole/overflow flag", data={"re": self.re, "im": self.im})

    @classmethod
    def from_complex(cls, z: complex, flag: ValueFlag = ValueFlag.OK) -> "ComplexValue":
        return cls(float(z.real), float(z.imag), flag)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def is_finite(self) -> bool:
        return self.flag in (ValueFlag.OK, ValueFlag.INACCURATE)

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)

    def conjugate(self) -> "ComplexValue":
        return ComplexValue(self.re, -self.im, self.flag)


Number = Union[complex, float, int, ComplexValue]


def as_complex(s: Number) -> complex:
    """统一转换为 complex"""
    if isinstance(s, ComplexValue):
        return s.value
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("argument must be finite", data={"s": repr(s)})
    return z


class FunctionKind(str, Enum):
    """函数种类"""

    ZETA = "zeta"
    GAMMA = "gamma"
    JACOBI_CN = "cn"
    BESSEL_J = "bessel_j"


@dataclass(frozen=True)
class FunctionTag:
    """带参数的函数标签 (cn 需要 k_sq, J 需要 p)"""

    kind: FunctionKind
    k_sq: Optional[float] = None
    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind is FunctionKind.JACOBI_CN:
            if self.k_sq is None or not 0.0 < self.k_sq < 1.0:
                raise DomainError("cn needs k_sq strictly inside (0, 1)", data={"k_sq": self.k_sq})
        elif self.k_sq is not None:
            raise DomainError(f"k_sq only applies to cn, not {self.kind.value}")
        if self.kind is FunctionKind.BESSEL_J:
            if self.p is None or int(self.p) != self.p:
                raise DomainError("J_p needs an integer order p", data={"p": self.p})
        elif self.p is not None:
            raise DomainError(f"p only applies to J_p, not {self.kind.value}")

    @classmethod
    def zeta(cls) -> "FunctionTag":
        return cls(FunctionKind.ZETA)

    @classmethod
    def gamma(cls) -> "FunctionTag":
        return cls(FunctionKind.GAMMA)

    @classmethod
    def cn(cls, k_sq: float) -> "FunctionTag":
        return cls(FunctionKind.JACOBI_CN, k_sq=k_sq)

    @classmethod
    def bessel_j(cls, p: int) -> "FunctionTag":
        return cls(FunctionKind.BESSEL_J, p=int(p))

    @property
    def label(self) -> str:
        """CSV / 日志中的短名"""
        if self.kind is FunctionKind.JACOBI_CN:
            return f"cn[k2={self.k_sq!r}]"
        if self.kind is FunctionKind.BESSEL_J:
            return f"J[p={self.p}]"
        return self.kind.value
