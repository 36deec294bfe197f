"""
运行配置

来源只有两个: 命令行参数与 --config 指定的 key=value 文件 (python-dotenv 读取),
命令行优先。不读取环境变量。
"""
import math
import re
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from django.conf import settings
from dotenv import dotenv_values
from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from apps.core.exceptions import ConfigError
from apps.ladder.types import OmegaVariant
from apps.levelset.types import Scheme

RANGE_PATTERN = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")

# 命令行上的简写
OMEGA_ALIASES = {
    "leading": OmegaVariant.LEADING_LOG,
    "leading_log": OmegaVariant.LEADING_LOG,
    "calibrated": OmegaVariant.CALIBRATED,
    "mean_square": OmegaVariant.MEAN_SQUARE,
}


class OutputFormat(str, Enum):
    """输出格式"""

    TEXT = "text"
    JSON = "json"
    CSV = "csv"
    LATEX = "latex"


def _crossbreed(name: str, default: Any) -> Any:
    """settings.CROSSBREED 中的数值默认值"""
    return getattr(settings, "CROSSBREED", {}).get(name, default)


def _l0() -> int:
    return int(_crossbreed("L0", 30))


def _int_list(value: str, name: str) -> List[int]:
    items = [item.strip() for item in str(value).split(",") if item.strip()]
    if not items or not all(item.isdigit() for item in items):
        raise ValueError(f"{name} must be a comma separated list of non-negative integers")
    return [int(item) for item in items]


class RunConfig(BaseSettings):
    """一次运行的参数"""

    model_config = SettingsConfigDict(extra="forbid", frozen=True, case_sensitive=True)

    L: int = Field(50, description="基区间 [πL, πL+U] 的 L")
    U: float = Field(1.0, description="基区间长度")
    omega: OmegaVariant = Field(OmegaVariant.CALIBRATED, description="ω(t) 的取法")
    k2: float = Field(default_factory=lambda: float(_crossbreed("K_SQ", 0.5)), description="cn 的模平方")
    p: int = Field(default_factory=lambda: int(_crossbreed("P", 0)), description="J_p 的阶")
    scheme: Scheme = Field(Scheme.SIMPLE, description="分配方案")
    m: str = Field("1..3", description="Simple 方案的 m 范围 A..B")
    n: str = Field("1..3", description="Simple 方案的 n 范围 A..B")
    cells: str = Field("0", description="Cyclic 方案的格列表")
    row: int = Field(1, ge=1, description="levelset 的行号")
    slot: int = Field(1, ge=1, le=4, description="延拓所用的位置")
    trace: int = Field(0, ge=0, description="延拓的点数, 0 表示不延拓")
    step: float = Field(0.02, description="延拓步长")
    Ls: str = Field("100,1000", description="ladder 诊断的 L 列表")
    tol: float = Field(default_factory=lambda: float(_crossbreed("TOL", 1e-8)), description="残差容差")
    jobs: int = Field(default_factory=lambda: int(_crossbreed("JOBS", 1)), description="并行进程数")
    format: Optional[OutputFormat] = Field(None, description="输出格式, 为空时用命令的默认格式")
    out: Optional[Path] = Field(None, description="输出文件, 为空时写 stdout")

    @classmethod
    def settings_customise_sources(
        cls, settings_cls, init_settings, env_settings, dotenv_settings, file_secret_settings
    ):  # type: ignore[override]
        # 只接受显式参数
        return (init_settings,)

    @field_validator("L")
    @classmethod
    def check_L(cls, value: int) -> int:
        L0 = _l0()
        if value < L0:
            raise ValueError(f"L must be >= L0 = {L0}")
        return value

    @field_validator("U")
    @classmethod
    def check_U(cls, value: float) -> float:
        if not 0.0 < value < math.pi / 2.0:
            raise ValueError("U must lie in (0, pi/2)")
        return value

    @field_validator("omega", mode="before")
    @classmethod
    def parse_omega(cls, value: Any) -> Any:
        if isinstance(value, str) and value.lower() in OMEGA_ALIASES:
            return OMEGA_ALIASES[value.lower()]
        return value

    @field_validator("k2")
    @classmethod
    def check_k2(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError("k2 must lie in (0, 1)")
        return value

    @field_validator("m", "n")
    @classmethod
    def check_range(cls, value: str) -> str:
        match = RANGE_PATTERN.match(value)
        if match is None:
            raise ValueError("range must look like A..B")
        lo, hi = int(match.group(1)), int(match.group(2))
        if not 1 <= lo <= hi:
            raise ValueError("range needs 1 <= A <= B")
        return f"{lo}..{hi}"

    @field_validator("cells")
    @classmethod
    def check_cells(cls, value: str) -> str:
        return ",".join(str(c) for c in _int_list(value, "cells"))

    @field_validator("Ls")
    @classmethod
    def check_Ls(cls, value: str) -> str:
        values = _int_list(value, "Ls")
        if min(values) < 2:
            raise ValueError("Ls entries must be >= 2")
        return ",".join(str(v) for v in values)

    @field_validator("step")
    @classmethod
    def check_step(cls, value: float) -> float:
        if not 0.0 < value <= 0.1:
            raise ValueError("step must lie in (0, 0.1]")
        return value

    @field_validator("tol")
    @classmethod
    def check_tol(cls, value: float) -> float:
        if not (math.isfinite(value) and value > 0.0):
            raise ValueError("tol must be positive")
        return value

    @field_validator("jobs")
    @classmethod
    def check_jobs(cls, value: int) -> int:
        if value < 1:
            raise ValueError("jobs must be >= 1")
        return value

    @property
    def k_sq(self) -> float:
        return self.k2

    @property
    def m_range(self) -> range:
        return _as_range(self.m)

    @property
    def n_range(self) -> range:
        return _as_range(self.n)

    @property
    def cell_list(self) -> List[int]:
        return _int_list(self.cells, "cells")

    @property
    def L_list(self) -> List[int]:
        return _int_list(self.Ls, "Ls")

    def artifact_dict(self) -> Dict[str, Any]:
        """写入产物的参数; 输出位置与并行度不影响结果"""
        return self.model_dump(mode="json", exclude={"out", "format", "jobs"})


def _as_range(value: str) -> range:
    lo, hi = _bounds(value)
    return range(lo, hi + 1)


def _bounds(value: str) -> Tuple[int, int]:
    match = RANGE_PATTERN.match(value)
    if match is None:
        raise ConfigError("range must look like A..B", data={"value": value})
    return int(match.group(1)), int(match.group(2))


def read_config_file(path: Path) -> Dict[str, str]:
    """读取 key=value 文件, 拒绝未知键"""
    path = Path(path)
    if not path.is_file():
        raise ConfigError("config file not found", data={"path": str(path)})
    values = {key: value for key, value in dotenv_values(path).items() if value is not None}
    unknown = sorted(set(values) - set(RunConfig.model_fields))
    if unknown:
        raise ConfigError("unknown keys in config file", data={"path": str(path), "keys": unknown})
    return values


def load_config(config_file: Optional[Path] = None, flags: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """文件 < 命令行"""
    values: Dict[str, Any] = read_config_file(config_file) if config_file else {}
    values.update({key: value for key, value in (flags or {}).items() if value is not None})
    try:
        return RunConfig(**values)
    except ValidationError as exc:
        errors = [f"{'.'.join(str(part) for part in err['loc'])}: {err['msg']}" for err in exc.errors()]
        raise ConfigError("invalid run configuration", data={"errors": errors}) from exc
