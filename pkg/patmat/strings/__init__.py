"""
String edit distance, approximate matching and the subsequence index
字符串编辑距离、近似匹配与子序列索引
"""

from .edit import CellTable, edit_distance, distance_matrix, edit_distance_fr, approx_positions
from .subseq import (
    QueryStats,
    SubseqIndex,
    build_index,
    is_subsequence,
    encode_index,
    decode_index,
    save_index,
    load_index,
)

__all__ = [
    'CellTable', 'edit_distance', 'distance_matrix', 'edit_distance_fr', 'approx_positions',
    'QueryStats', 'SubseqIndex', 'build_index', 'is_subsequence',
    'encode_index', 'decode_index', 'save_index', 'load_index',
]
