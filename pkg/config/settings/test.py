from .base import *  # noqa
from .base import CROSSBREED, SERVICE_NAME
from .logging import build_logging

# 测试设置
DEBUG = False

# 日志设置
LOGGING = build_logging(SERVICE_NAME, "test")

# 数值设置
CROSSBREED = {**CROSSBREED, "JOBS": 1}

# 测试运行器设置
TEST_RUNNER = "django.test.runner.DiscoverRunner"
