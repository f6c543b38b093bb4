"""
Regular expression matching: Thompson automata, bit-parallel engines, approximate matching
正则表达式匹配：Thompson 自动机、位并行引擎、近似匹配
"""

from .core import (
    BETA_SYM,
    RegexAst,
    ParseTree,
    Tnfa,
    parse_regex,
    to_pattern,
    thompson,
    build_tnfa,
    step,
    find_matches,
)
from .engines import (
    SimulationDS,
    ClassicDS,
    SimpleDS,
    SeparatorDS,
    FrDS,
    FRTableCache,
    Subautomaton,
    NestedDecomposition,
    NestedSimulator,
    EngineChoice,
    Engine,
    ENGINE_KINDS,
    nested_decompose,
    run_decomposed,
    build_simple_ds,
    build_separator_ds,
    build_fr_ds,
    select_engine,
    build_engine,
)
from .approx import ApproxStats, ApproxResult, approx_regex

__all__ = [
    'BETA_SYM', 'RegexAst', 'ParseTree', 'Tnfa', 'parse_regex', 'to_pattern', 'thompson',
    'build_tnfa', 'step', 'find_matches',
    'SimulationDS', 'ClassicDS', 'SimpleDS', 'SeparatorDS', 'FrDS', 'FRTableCache',
    'Subautomaton', 'NestedDecomposition', 'NestedSimulator', 'EngineChoice', 'Engine',
    'ENGINE_KINDS', 'nested_decompose', 'run_decomposed', 'build_simple_ds',
    'build_separator_ds', 'build_fr_ds', 'select_engine', 'build_engine',
    'ApproxStats', 'ApproxResult', 'approx_regex',
]
