import logging
import time
import uuid
from contextlib import contextmanager
from contextvars import ContextVar
from functools import wraps
from typing import Any, Callable, Dict, Generator, Optional, TypeVar, cast

from pythonjsonlogger.json import JsonFormatter

# 类型变量
T = TypeVar("T", bound=Callable[..., Any])

# 运行上下文 (run_id, command ...)
_run_context: ContextVar[Dict[str, Any]] = ContextVar("run_context", default={})


class RunContextFilter(logging.Filter):
    """运行上下文过滤器"""

    def filter(self, record: logging.LogRecord) -> bool:
        for key, value in _run_context.get().items():
            if not hasattr(record, key):
                setattr(record, key, value)
        return True


class CrossbreedJsonFormatter(JsonFormatter):
    """JSON格式化器"""

    def __init__(self, *args: Any, **kwargs: Any):
        self.default_fields = kwargs.pop("default_fields", {})
        kwargs.setdefault("fmt", "%(asctime)s %(levelname)s %(name)s %(message)s")
        super().__init__(*args, **kwargs)

    def add_fields(
        self,
        log_record: Dict[str, Any],
        record: logging.LogRecord,
        message_dict: Dict[str, Any],
    ) -> None:
        super().add_fields(log_record, record, message_dict)
        # 默认字段
        for key, value in self.default_fields.items():
            log_record.setdefault(key, value)
        # 上下文字段
        for key, value in _run_context.get().items():
            log_record.setdefault(key, value)
        log_record["function"] = record.funcName
        log_record["line"] = record.lineno


@contextmanager
def log_context(**kwargs: Any) -> Generator[Dict[str, Any], None, None]:
    """日志上下文管理器"""
    context = {**_run_context.get(), **kwargs}
    context.setdefault("run_id", uuid.uuid4().hex[:12])
    token = _run_context.set(context)
    try:
        yield context
    finally:
        _run_context.reset(token)


class PerformanceLogger:
    """性能日志记录器"""

    def __init__(self, logger: Optional[logging.Logger] = None, context: Optional[dict] = None):
        self.logger = logger or logging.getLogger("apps.performance")
        self.start_time: Optional[float] = None
        self.checkpoints: Dict[str, float] = {}
        self.context = context or {}

    def start(self, label: str = "start") -> None:
        """开始计时"""
        self.start_time = time.perf_counter()
        self.checkpoints[label] = self.start_time
        self.logger.debug(
            f"Performance monitoring started: {label}",
            extra={"data": {"context": self.context}},
        )

    def checkpoint(self, label: str, context: Optional[dict] = None) -> float:
        """记录检查点"""
        if self.start_time is None:
            raise RuntimeError("Performance logger not started")
        current_time = time.perf_counter()
        self.checkpoints[label] = current_time
        duration = current_time - self.start_time
        self.logger.debug(
            f"Checkpoint reached: {label}",
            extra={"data": {"label": label, "duration": duration, "context": {**self.context, **(context or {})}}},
        )
        return duration

    def end(self, label: str = "end", context: Optional[dict] = None) -> Dict[str, float]:
        """结束计时并记录日志"""
        if self.start_time is None:
            raise RuntimeError("Performance logger not started")

        end_time = time.perf_counter()
        self.checkpoints[label] = end_time

        # 各阶段耗时
        durations = {}
        last_time = self.start_time
        for checkpoint, timestamp in self.checkpoints.items():
            durations[checkpoint] = timestamp - last_time
            last_time = timestamp
        durations["total"] = end_time - self.start_time

        self.logger.info(
            f"Performance monitoring completed: {label}",
            extra={"data": {"durations": durations, "context": {**self.context, **(context or {})}}},
        )
        return durations


def log_exception(
    exc: Exception,
    logger: Optional[logging.Logger] = None,
    context: Optional[dict] = None,
) -> None:
    """记录异常日志"""
    if logger is None:
        logger = logging.getLogger("apps")

    log_data: Dict[str, Any] = {
        "exc_type": type(exc).__name__,
        "exc_message": str(exc),
        "context": context or {},
    }
    to_dict = getattr(exc, "to_dict", None)
    if callable(to_dict):
        log_data["error"] = to_dict()

    logger.error(
        f"Exception occurred: {type(exc).__name__}",
        extra={"data": log_data},
        exc_info=True,
    )


def log_timing(
    logger: Optional[logging.Logger] = None,
    level: int = logging.INFO,
    message: Optional[str] = None,
    threshold: Optional[float] = None,
) -> Callable[[T], T]:
    """函数执行时间日志装饰器"""

    def decorator(func: T) -> T:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            start_time = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                duration = time.perf_counter() - start_time
                # 只记录超过阈值的耗时
                if threshold is None or duration >= threshold:
                    log = logger or logging.getLogger(func.__module__)
                    log.log(
                        level,
                        message or f"{func.__name__} took {duration:.2f} seconds",
                        extra={"data": {"function": func.__name__, "duration": duration, "threshold": threshold}},
                    )

        return cast(T, wrapper)

    return decorator


def verbosity_to_level(verbosity: int) -> int:
    """命令行 verbosity 转日志级别"""
    return {0: logging.ERROR, 1: logging.WARNING, 2: logging.INFO}.get(verbosity, logging.DEBUG)
