"""
Tree matching: representation, edit/alignment distance, inclusion, path subsequence
树匹配：表示、编辑/对齐距离、包含、路径子序列
"""

from .tree import BETA, LabeledTree, TreeIndex, parse_tree, serialize, build_index, deep
from .distance import (
    CostFunction,
    UnitCost,
    TableCost,
    edit_distance_oracle,
    zhang_shasha,
    alignment_distance,
)
from .inclusion import FlCounter, parent_list, nca_list, fl, mop, emb, km_oracle, including_subtrees
from .tps import (
    TpsStats,
    PaddedPattern,
    NodeDictionary,
    MicroTree,
    MicroTreeDecomposition,
    down,
    tps_simple,
    tps_fast,
    micro_decompose,
)

__all__ = [
    'BETA', 'LabeledTree', 'TreeIndex', 'parse_tree', 'serialize', 'build_index', 'deep',
    'CostFunction', 'UnitCost', 'TableCost',
    'edit_distance_oracle', 'zhang_shasha', 'alignment_distance',
    'FlCounter', 'parent_list', 'nca_list', 'fl', 'mop', 'emb', 'km_oracle', 'including_subtrees',
    'TpsStats', 'PaddedPattern', 'NodeDictionary', 'MicroTree', 'MicroTreeDecomposition',
    'down', 'tps_simple', 'tps_fast', 'micro_decompose',
]
