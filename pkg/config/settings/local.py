from .base import *  # noqa
from .base import ENVIRONMENT, LOGS_DIR, SERVICE_NAME
from .logging import build_logging

# GENERAL
# ------------------------------------------------------------------------------
DEBUG = True

# LOGGING
# ------------------------------------------------------------------------------
LOGGING = build_logging(SERVICE_NAME, ENVIRONMENT, log_dir=LOGS_DIR)
