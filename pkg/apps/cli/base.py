import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type

from django.core.management.base import BaseCommand, CommandError, CommandParser

from apps.core.exceptions import ArtifactError, BaseError, ConfigError, DegenerateConstantError
from apps.core.logging import PerformanceLogger, log_context, log_exception, verbosity_to_level

from .config import OMEGA_ALIASES, OutputFormat, RunConfig, load_config

logger = logging.getLogger(__name__)

# 配置字段对应的命令行参数
FLAGS: Dict[str, Dict[str, Any]] = {
    "L": {"type": int, "help": "base segment [pi L, pi L + U]"},
    "U": {"type": float, "help": "segment length in (0, pi/2)"},
    "omega": {"choices": sorted(OMEGA_ALIASES), "help": "omega(t) variant"},
    "k2": {"type": float, "help": "cn modulus squared"},
    "p": {"type": int, "help": "Bessel order"},
    "scheme": {"choices": ["simple", "cyclic"], "help": "level-set assignment"},
    "m": {"help": "m range A..B (simple scheme)"},
    "n": {"help": "n range A..B (simple scheme)"},
    "cells": {"help": "comma separated cells (cyclic scheme)"},
    "row": {"type": int, "help": "row of the locus family"},
    "slot": {"type": int, "help": "slot traced by --trace"},
    "trace": {"type": int, "help": "number of polyline points"},
    "step": {"type": float, "help": "continuation step length"},
    "Ls": {"help": "comma separated L values"},
    "tol": {"type": float, "help": "residual tolerance"},
    "jobs": {"type": int, "help": "worker processes"},
}

# 其余 BaseError 的退出码为 1
EXIT_CODES: Dict[Type[BaseError], int] = {
    ConfigError: 2,
    ArtifactError: 2,
    DegenerateConstantError: 2,
}


class CrossbreedCommand(BaseCommand):
    """子命令基类: 读配置, 设日志, 运行, 输出"""

    # 本命令接受的配置字段
    config_fields: Tuple[str, ...] = ()
    formats: Tuple[OutputFormat, ...] = (OutputFormat.TEXT, OutputFormat.JSON)
    default_format: OutputFormat = OutputFormat.TEXT
    exit_codes: Dict[Type[BaseError], int] = {}
    # 输出之后仍要以非零码退出时由 run 设置
    failure: Optional[BaseError] = None

    @property
    def command_name(self) -> str:
        return self.__class__.__module__.rsplit(".", 1)[-1]

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--config", dest="config_file", help="key=value file, overridden by flags")
        for name in self.config_fields:
            parser.add_argument(f"--{name}", dest=name, default=None, **FLAGS[name])
        parser.add_argument("--format", choices=[f.value for f in self.formats], default=None)
        parser.add_argument("--out", default=None, help="output file, stdout when omitted")

    def load(self, options: Dict[str, Any]) -> RunConfig:
        flags = {name: options.get(name) for name in self.config_fields + ("format", "out")}
        config_file = options.get("config_file")
        config = load_config(Path(config_file) if config_file else None, flags)
        if config.format is not None and config.format not in self.formats:
            raise ConfigError(
                f"format {config.format.value} is not supported by {self.command_name}",
                data={"formats": [f.value for f in self.formats]},
            )
        return config

    def output_format(self, config: RunConfig) -> OutputFormat:
        return config.format or self.default_format

    def run(self, config: RunConfig, options: Dict[str, Any]) -> str:
        raise NotImplementedError

    def exit_code(self, exc: BaseError) -> int:
        for error_class, code in {**EXIT_CODES, **self.exit_codes}.items():
            if isinstance(exc, error_class):
                return code
        return 1

    def emit(self, text: str, out: Optional[Path]) -> None:
        if out is None:
            self.stdout.write(text, ending="")
            return
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        logger.info("Output written", extra={"data": {"path": str(out), "bytes": len(text)}})

    def handle(self, *args: Any, **options: Any) -> None:
        self.failure = None
        logging.getLogger("apps").setLevel(verbosity_to_level(options.get("verbosity", 1)))
        with log_context(command=self.command_name):
            performance = PerformanceLogger(context={"command": self.command_name})
            performance.start()
            try:
                config = self.load(options)
                text = self.run(config, options)
            except BaseError as exc:
                log_exception(exc, logger, context={"command": self.command_name})
                raise CommandError(f"{exc.error_code.name}: {exc.message}", returncode=self.exit_code(exc)) from exc
            self.emit(text, config.out)
            performance.end(self.command_name)
            if self.failure is not None:
                log_exception(self.failure, logger, context={"command": self.command_name})
                raise CommandError(
                    f"{self.failure.error_code.name}: {self.failure.message}", returncode=self.exit_code(self.failure)
                )
