from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, Optional


class ErrorCode(Enum):
    """错误码枚举"""

    # 函数求值 (1xxx)
    DOMAIN_ERROR = (1001, "argument outside the validated range")
    POLE_ERROR = (1002, "argument too close to a pole")
    OVERFLOW = (1003, "value beyond the representable range")
    ACCURACY = (1004, "requested tolerance unreachable")

    # 阶梯模型 (2xxx)
    QUADRATURE_FAILURE = (2001, "quadrature tolerance unreachable")
    BRACKET_FAILURE = (2002, "root not bracketed by the checkpoint table")

    # 混合公式 (3xxx)
    NO_ROOT = (3001, "mean-value equation has no root on the segment")
    DEGENERATE_CONSTANT = (3002, "hybrid constant vanishes to tolerance")

    # 水平集 (4xxx)
    LOCUS_NOT_FOUND = (4001, "no point of the level curve in the scanned region")
    STEP_FAILURE = (4002, "continuation step failed after repeated halving")
    POLE_PROXIMITY = (4003, "locus point too close to a zero or a pole")

    # 杂交 (5xxx)
    PROVENANCE_MISMATCH = (5001, "locus targets differ from the hybrid constants")
    NEUTRAL_FACTOR_MISMATCH = (5002, "row equations do not share the neutral factor")
    RESIDUE_MISMATCH = (5003, "rows do not share the residue class")

    # 配置与产物 (6xxx)
    CONFIG_ERROR = (6001, "invalid run configuration")
    ARTIFACT_ERROR = (6002, "artifact cannot be read or validated")

    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message


@dataclass
class ErrorReport:
    """错误报告"""

    code: int
    name: str
    message: str
    data: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class BaseError(Exception):
    """基础错误类"""

    default_code: ErrorCode = ErrorCode.CONFIG_ERROR

    def __init__(
        self,
        message: Optional[str] = None,
        error_code: Optional[ErrorCode] = None,
        data: Optional[Dict[str, Any]] = None,
    ):
        """
        初始化错误对象
        :param message: 自定义错误消息
        :param error_code: 错误码枚举
        :param data: 额外数据
        """
        self.error_code = error_code or self.default_code
        self.message = message or self.error_code.message
        self.data = data or {}
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典格式"""
        error_dict: Dict[str, Any] = {
            "code": self.error_code.code,
            "name": self.error_code.name,
            "message": self.message,
        }
        if self.data:
            error_dict["data"] = self.data
        return error_dict

    def report(self) -> ErrorReport:
        return ErrorReport(
            code=self.error_code.code,
            name=self.error_code.name,
            message=self.message,
            data=dict(self.data),
        )


# 函数求值
class DomainError(BaseError):
    default_code = ErrorCode.DOMAIN_ERROR


class PoleError(BaseError):
    default_code = ErrorCode.POLE_ERROR


class OverflowFlagError(BaseError):
    default_code = ErrorCode.OVERFLOW


class AccuracyError(BaseError):
    default_code = ErrorCode.ACCURACY


# 阶梯模型
class QuadratureError(BaseError):
    default_code = ErrorCode.QUADRATURE_FAILURE


class BracketError(BaseError):
    default_code = ErrorCode.BRACKET_FAILURE


# 混合公式
class NoRootError(BaseError):
    default_code = ErrorCode.NO_ROOT


class DegenerateConstantError(BaseError):
    """常数退化, 调用方应微调 U 后重试"""

    default_code = ErrorCode.DEGENERATE_CONSTANT


# 水平集
class LocusNotFoundError(BaseError):
    default_code = ErrorCode.LOCUS_NOT_FOUND


class StepFailureError(BaseError):
    default_code = ErrorCode.STEP_FAILURE


class PoleProximityError(BaseError):
    default_code = ErrorCode.POLE_PROXIMITY


# 杂交
class ProvenanceMismatchError(BaseError):
    default_code = ErrorCode.PROVENANCE_MISMATCH


class NeutralFactorMismatchError(BaseError):
    default_code = ErrorCode.NEUTRAL_FACTOR_MISMATCH


class ResidueMismatchError(BaseError):
    default_code = ErrorCode.RESIDUE_MISMATCH


# 配置与产物
class ConfigError(BaseError):
    default_code = ErrorCode.CONFIG_ERROR


class ArtifactError(BaseError):
    default_code = ErrorCode.ARTIFACT_ERROR
