"""
Core configuration and errors
核心配置与错误类型
"""

from .config import PatmatConfig, load_env_config
from .errors import (
    PatmatError,
    TreeSyntaxError,
    RegexSyntaxError,
    NonMetricCostError,
    CorruptContainerError,
    BudgetExceeded,
)

__all__ = [
    'PatmatConfig',
    'load_env_config',
    'PatmatError',
    'TreeSyntaxError',
    'RegexSyntaxError',
    'NonMetricCostError',
    'CorruptContainerError',
    'BudgetExceeded',
]
