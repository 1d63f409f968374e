"""
Logging utilities for the application
"""
import sys

from loguru import logger

from app.core.config import settings

# stdout carries JSON output, so every sink writes elsewhere
logger.remove()
logger.configure(extra={"name": "weyl_hurwitz"})

_level = "DEBUG" if settings.DEBUG else settings.LOG_LEVEL.upper()

logger.add(
    sys.stderr,
    level=_level,
    format="{time:YYYY-MM-DD HH:mm:ss} - {extra[name]} - {level} - {message}",
)

if settings.LOG_FILE:
    logger.add(settings.LOG_FILE, level=_level, rotation="10 MB", enqueue=True)

# Create app logger
app_logger = logger.bind(name="weyl_hurwitz")

if settings.DEBUG:
    app_logger.debug("Debug logging enabled")
