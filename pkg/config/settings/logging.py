from pathlib import Path
from typing import Any, Dict, Optional


def build_logging(service: str, environment: str, log_dir: Optional[Path] = None) -> Dict[str, Any]:
    """
    日志配置
    :param service: 服务名, 写入每条日志
    :param environment: 环境名
    :param log_dir: 给出时追加按天轮转的文件日志
    """
    handlers: Dict[str, Any] = {
        # 命令输出走 stdout, 日志一律写 stderr
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "json",
            "filters": ["run_context"],
        },
    }
    app_handlers = ["console"]
    if log_dir is not None:
        log_dir.mkdir(parents=True, exist_ok=True)
        handlers["file_info"] = {
            "level": "INFO",
            "class": "logging.handlers.TimedRotatingFileHandler",
            "filename": str(log_dir / "info.log"),
            "when": "midnight",
            "interval": 1,
            "backupCount": 30,
            "formatter": "json",
            "filters": ["run_context"],
            "encoding": "utf-8",
        }
        handlers["file_error"] = {
            "level": "ERROR",
            "class": "logging.handlers.TimedRotatingFileHandler",
            "filename": str(log_dir / "error.log"),
            "when": "midnight",
            "interval": 1,
            "backupCount": 30,
            "formatter": "json",
            "filters": ["run_context"],
            "encoding": "utf-8",
        }
        app_handlers += ["file_info", "file_error"]

    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "json": {
                "()": "apps.core.logging.CrossbreedJsonFormatter",
                "default_fields": {
                    "service": service,
                    "environment": environment,
                },
            },
            "simple": {
                "format": "[%(levelname)s] %(message)s",
            },
        },
        "filters": {
            "run_context": {
                "()": "apps.core.logging.RunContextFilter",
            },
        },
        "handlers": handlers,
        "loggers": {
            "django": {
                "handlers": ["console"],
                "level": "WARNING",
                "propagate": False,
            },
            "apps": {
                "handlers": app_handlers,
                "level": "WARNING",
                "propagate": False,
            },
            "apps.performance": {
                "handlers": app_handlers,
                "level": "INFO",
                "propagate": False,
            },
        },
        "root": {
            "handlers": ["console"],
            "level": "WARNING",
        },
    }
