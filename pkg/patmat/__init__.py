"""
patmat - Pattern Matching Toolkit
模式匹配工具包

Matching in ordered labeled trees and in strings, with word-level parallel and
Four-Russians speedups, plus search directly on Ziv-Lempel compressed text.

Main Components:
- core: Configuration (PatmatConfig, load_env_config) and the error hierarchy
- utils: Rotating / structured logging, timing decorators, atomic file writes
- trees: Tree edit and alignment distance, tree inclusion, tree path subsequence
- regex: Thompson automata, bit-parallel engines, approximate regex matching
- strings: Edit distance, approximate string matching, subsequence index
- zl: ZL78 / ZLW codec, PMZL1 container, compressed approximate and regex search

Usage:
    from patmat import parse_tree, zhang_shasha, build_engine, compress, capprox_search

    zhang_shasha(parse_tree("a(e(b,c),d)"), parse_tree("a(b,f(c,d))"))  # 2
    build_engine("(ab|ba)*a").find_matches(b"abbaa")
    capprox_search(compress(b"ananasbananer"), b"base", 2, tau=4)  # [6, 7, 8, 9, 10, 12]
"""

from .core import (
    PatmatConfig,
    load_env_config,
    PatmatError,
    TreeSyntaxError,
    RegexSyntaxError,
    NonMetricCostError,
    CorruptContainerError,
)

from .trees import (
    LabeledTree,
    parse_tree,
    serialize,
    zhang_shasha,
    alignment_distance,
    emb,
    including_subtrees,
    tps_simple,
    tps_fast,
)

from .regex import (
    parse_regex,
    thompson,
    find_matches,
    select_engine,
    build_engine,
    approx_regex,
)

from .strings import (
    edit_distance,
    edit_distance_fr,
    approx_positions,
    build_index,
    is_subsequence,
)

from .zl import (
    compress,
    decompress,
    select_special,
    capprox_search,
    cregex_search,
    save_container,
    load_container,
)

# Package metadata
__version__ = "1.0.0"
__author__ = "patmat developers"
__description__ = "Pattern matching in trees, strings and Ziv-Lempel compressed text"

# Main exports
__all__ = [
    # Configuration and errors
    'PatmatConfig',
    'load_env_config',
    'PatmatError',
    'TreeSyntaxError',
    'RegexSyntaxError',
    'NonMetricCostError',
    'CorruptContainerError',

    # Trees
    'LabeledTree',
    'parse_tree',
    'serialize',
    'zhang_shasha',
    'alignment_distance',
    'emb',
    'including_subtrees',
    'tps_simple',
    'tps_fast',

    # Regular expressions
    'parse_regex',
    'thompson',
    'find_matches',
    'select_engine',
    'build_engine',
    'approx_regex',

    # Strings
    'edit_distance',
    'edit_distance_fr',
    'approx_positions',
    'build_index',
    'is_subsequence',

    # Compressed text
    'compress',
    'decompress',
    'select_special',
    'capprox_search',
    'cregex_search',
    'save_container',
    'load_container',
]
