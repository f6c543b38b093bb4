"""
Utils module
工具模块
"""

from .logger import RotatingLogger, SearchLogger, create_logger, now_iso
from .decorators import log_execution_time, timed_median
from .file_ops import write_bytes_atomic, write_json_atomic, read_json_safe

__all__ = [
    'RotatingLogger', 'SearchLogger', 'create_logger', 'now_iso',
    'log_execution_time', 'timed_median',
    'write_bytes_atomic', 'write_json_atomic', 'read_json_safe',
]
