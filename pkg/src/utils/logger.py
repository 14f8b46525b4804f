# src/utils/logger.py
"""Centralized logging for long enumerations and verification runs."""
from loguru import logger as _logger
import sys
import os
from src.config.settings import settings


def setup_logger():
    _logger.remove()
    # stdout is reserved for command output
    _logger.add(sys.stderr, format="{time} | {level} | {message}", level=settings.log_level)
    if settings.log_file:
        os.makedirs(os.path.dirname(settings.log_file) or ".", exist_ok=True)
        _logger.add(settings.log_file, rotation="1 MB", retention="7 days", format="{time} | {level} | {message} | {extra}")
    return _logger

logger = setup_logger()
