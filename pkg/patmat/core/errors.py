"""
Error hierarchy
错误类型

All library errors derive from PatmatError, itself a ValueError, so callers that
only care about "bad input" can catch ValueError.
"""
from __future__ import annotations

from typing import Optional


class PatmatError(ValueError):
    """Base class for every error raised by the toolkit / 工具包错误基类"""


class TreeSyntaxError(PatmatError):
    """Malformed parenthesized tree text / 树文本语法错误"""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class RegexSyntaxError(PatmatError):
    """Malformed regular expression / 正则表达式语法错误"""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class NonMetricCostError(PatmatError):
    """A cost function violates identity, symmetry or the triangle inequality"""


class CorruptContainerError(PatmatError):
    """Bad PMZL1 / PMSQ1 data; index is the element index or None for the header"""

    def __init__(self, message: str, index: Optional[int] = None):
        where = "header" if index is None else f"element {index}"
        super().__init__(f"{message} ({where})")
        self.index = index


class BudgetExceeded(Exception):
    """Internal signal: a Four-Russians table would exceed its budget.

    Never escapes a public function; callers catch it and fall back.
    """
