"""Logging module for city-viz-forge."""

from .logger import (
    LogBuffer,
    BufferHandler,
    log_buffer,
    logger,
    current_log_level,
    set_log_level,
    get_logger,
    get_log_buffer,
    dump_log_buffer,
)

__all__ = [
    "LogBuffer",
    "BufferHandler",
    "log_buffer",
    "logger",
    "current_log_level",
    "set_log_level",
    "get_logger",
    "get_log_buffer",
    "dump_log_buffer",
]
