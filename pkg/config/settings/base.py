import math
from pathlib import Path

import environ

# START
# ------------------------------------------------------------------------------
ROOT_DIR = Path(__file__).resolve(strict=True).parent.parent.parent

env = environ.Env()

READ_DOT_ENV_FILE = env.bool("DJANGO_READ_DOT_ENV_FILE", default=False)
if READ_DOT_ENV_FILE:
    env.read_env(str(ROOT_DIR / ".env"))

# GENERAL
# ------------------------------------------------------------------------------
DEBUG = env.bool("DJANGO_DEBUG", default=False)
SECRET_KEY = env("DJANGO_SECRET_KEY", default="ladder-crossbreed-offline")
TIME_ZONE = "UTC"
LANGUAGE_CODE = "en-us"
USE_I18N = False
USE_TZ = True

# DATABASES
# ------------------------------------------------------------------------------
# 纯计算项目, 不使用数据库
DATABASES: dict = {}

# APPS
# ------------------------------------------------------------------------------
LOCAL_APPS = [
    "apps.core",
    "apps.specfun",
    "apps.ladder",
    "apps.hybrid",
    "apps.levelset",
    "apps.crossbreed",
    "apps.cli",
]
INSTALLED_APPS = LOCAL_APPS

# LOGGING
# ------------------------------------------------------------------------------
LOGS_DIR = ROOT_DIR / "logs"
SERVICE_NAME = "ladder-crossbreed"
ENVIRONMENT = env("DJANGO_ENV", default="local")

from .logging import build_logging  # noqa: E402

LOGGING = build_logging(SERVICE_NAME, ENVIRONMENT)

# CROSSBREED
# ------------------------------------------------------------------------------
CROSSBREED = {
    # 混合常数的最小 L
    "L0": 30,
    # φ₁(t₀) 的锚点
    "ANCHOR_T0": 10.0,
    "QUAD_TOL": 1e-10,
    "CHECKPOINT_SPACING": math.pi / 4,
    # 低于此高度用 Euler–Maclaurin
    "RS_THRESHOLD": 1000.0,
    "K_SQ": 0.5,
    "P": 0,
    "TOL": 1e-8,
    "LINE_STEP": 0.05,
    "JOBS": 1,
}
