"""
Ziv-Lempel compression and compressed-text search
Ziv-Lempel 压缩与压缩文本搜索
"""

from .codec import (
    SCHEMES,
    CompressedText,
    DictTrie,
    ReferenceView,
    SpecialSet,
    compress,
    decompress,
    build_trie,
    select_special,
)
from .container import encode_container, decode_container, save_container, load_container
from .search import (
    CSearchStats,
    ApproxDescription,
    describe_elements,
    capprox_search,
    transition_sets_at,
    cregex_search,
)

__all__ = [
    'SCHEMES', 'CompressedText', 'DictTrie', 'ReferenceView', 'SpecialSet',
    'compress', 'decompress', 'build_trie', 'select_special',
    'encode_container', 'decode_container', 'save_container', 'load_container',
    'CSearchStats', 'ApproxDescription', 'describe_elements', 'capprox_search',
    'transition_sets_at', 'cregex_search',
]
