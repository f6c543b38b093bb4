#!/usr/bin/env python3
"""
patmat command line / 模式匹配命令行工具

Every subcommand prints byte offsets (1-based end positions) or distances on
stdout, one line per input file; `--json` switches to one JSON object per line.
Exit codes: 0 success / match found, 1 no match, 2 usage or bad input,
3 I/O error, 4 corrupt container.
"""
from __future__ import annotations

import argparse
import importlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from patmat.core import CorruptContainerError, PatmatConfig, load_env_config
from patmat.utils import SearchLogger, write_bytes_atomic

EXIT_OK = 0
EXIT_NO_MATCH = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_CORRUPT = 4

# 工具注册表：key为命令名，值为(模块路径, 主函数名)
TOOLS = {
    'bench': ('tools.bench', 'main'),
}

# 统一别名映射
ALIAS_MAP = {
    'te': 'tree-ed',
    'ta': 'tree-align',
    'ti': 'tree-incl',
    're': 'regex',
    'ag': 'agrep',
    'ar': 'aregex',
    'sq': 'subseq',
    'zg': 'zgrep',
    'zr': 'zregex',
    'b': 'bench',
}

ENGINE_CHOICES = ('auto', 'bitpar', 'classic', 'simple', 'separator', 'fr', 'nested')


@dataclass
class CliConfig:
    """Resolved command line state / 命令行运行配置"""
    cmd: str
    config: PatmatConfig
    output: str = "text"  # text | json
    logger: Optional[SearchLogger] = None

    def notice(self, message: str) -> None:
        if self.logger:
            self.logger.log_notice(message)
        print(f"Notice: {message} / 提示", file=sys.stderr)

    def emit(self, record: Dict[str, Any], text: str) -> None:
        if self.output == "json":
            print(json.dumps(dict({"cmd": self.cmd}, **record), ensure_ascii=False, sort_keys=True))
        else:
            print(text)


def _non_negative(raw: str) -> int:
    value = int(raw)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='patmat', description='Pattern matching toolkit / 模式匹配工具包')
    sub = parser.add_subparsers(dest="cmd")

    # 全局选项 / Global options
    parser.add_argument('--json', action='store_true', help='JSON lines output / 以 JSON 行输出')
    parser.add_argument('-t', '--threads', type=_positive, default=None,
                        help='Files searched in parallel (default: PATMAT_THREADS or 1) / 并行搜索的文件数')
    parser.add_argument('-w', '--word-bits', type=_positive, default=None,
                        help='Emulated word size (default: PATMAT_WORD_BITS or 64) / 模拟字长')
    parser.add_argument('-e', '--env', default='.env', help='Path to env file (default: .env) / 环境变量文件路径（默认 .env）')
    parser.add_argument('-l', '--log-dir', default=None, help='Logs directory (default: logs) / 日志目录（默认: logs）')

    # 树子命令 / tree subcommands
    for name, alias, what in (('tree-ed', 'te', 'Tree edit distance / 树编辑距离'),
                              ('tree-align', 'ta', 'Tree alignment distance / 树对齐距离')):
        p = sub.add_parser(name, aliases=[alias], help=what)
        p.add_argument('a', help='first tree file / 第一棵树文件')
        p.add_argument('b', help='second tree file / 第二棵树文件')
        costs = p.add_mutually_exclusive_group()
        costs.add_argument('--unit', action='store_true', help='unit costs (default) / 单位代价')
        costs.add_argument('--costs', metavar='FILE', help="cost table, lines 'a b cost', '-' for λ / 代价表文件")

    ti = sub.add_parser('tree-incl', aliases=['ti'], help='Ordered tree inclusion / 有序树包含')
    ti.add_argument('pattern', help='pattern tree file / 模式树文件')
    ti.add_argument('text', help='text tree file / 文本树文件')
    ti.add_argument('--report-roots', action='store_true',
                    help='print 1-based preorder numbers of including subtrees / 输出包含子树根的先序编号')

    tps = sub.add_parser('tps', help='Tree path subsequence / 树路径子序列')
    tps.add_argument('pattern', help='pattern tree file / 模式树文件')
    tps.add_argument('text', help='text tree file / 文本树文件')
    tps.add_argument('--fast', action='store_true', help='micro-tree algorithm / 微树算法')
    tps.add_argument('--micro-size', type=_positive, default=None, help='micro-tree size s / 微树大小')

    # 字符串子命令 / string subcommands
    rx = sub.add_parser('regex', aliases=['re'], help='Regular expression search / 正则表达式搜索')
    rx.add_argument('pattern', help='regular expression / 正则表达式')
    rx.add_argument('files', nargs='+', help='input files / 输入文件')
    rx.add_argument('--engine', choices=ENGINE_CHOICES, default='auto', help='simulation engine (default: auto) / 模拟引擎')
    rx.add_argument('--no-empty', action='store_true', help='suppress empty matches / 不报告空匹配')

    ed = sub.add_parser('ed', help='String edit distance / 字符串编辑距离')
    ed.add_argument('a')
    ed.add_argument('b')
    ed.add_argument('--fr', action='store_true', help='Four-Russians cells / 四俄罗斯人方法')

    ag = sub.add_parser('agrep', aliases=['ag'], help='Approximate string search / 近似字符串搜索')
    ag.add_argument('-k', type=_non_negative, required=True, help='error bound, 0 <= k < |P| / 误差上限')
    ag.add_argument('pattern')
    ag.add_argument('files', nargs='+')

    ar = sub.add_parser('aregex', aliases=['ar'], help='Approximate regular expression search / 近似正则搜索')
    ar.add_argument('-d', type=_non_negative, required=True, help='error bound / 误差上限')
    ar.add_argument('pattern')
    ar.add_argument('files', nargs='+')
    ar.add_argument('--whole', action='store_true', help='whole-file distance and acceptance / 整体距离与接受判断')

    sq = sub.add_parser('subseq', aliases=['sq'], help='Subsequence index / 子序列索引')
    sq_sub = sq.add_subparsers(dest='action', required=True)
    sq_build = sq_sub.add_parser('build', help='build an index file / 建立索引')
    sq_build.add_argument('file')
    sq_build.add_argument('-o', '--out', required=True, help='index path / 索引路径')
    sq_query = sq_sub.add_parser('query', help='test a pattern / 查询子序列')
    sq_query.add_argument('index')
    sq_query.add_argument('pattern')

    # 压缩子命令 / compression subcommands
    zl = sub.add_parser('zl', help='Ziv-Lempel codec / Ziv-Lempel 压缩')
    zl_sub = zl.add_subparsers(dest='action', required=True)
    for action in ('compress', 'decompress'):
        p = zl_sub.add_parser(action)
        p.add_argument('file')
        p.add_argument('-o', '--out', required=True)
        if action == 'compress':
            p.add_argument('--scheme', choices=('zl78', 'zlw'), default='zl78', help='dictionary scheme / 字典方案')

    zg = sub.add_parser('zgrep', aliases=['zg'], help='Approximate search in compressed files / 压缩文件近似搜索')
    zg.add_argument('-k', type=_non_negative, required=True)
    zg.add_argument('pattern')
    zg.add_argument('files', nargs='+', help='PMZL1 containers / 压缩容器')
    zg.add_argument('--tau', type=_positive, default=None, help='special element spacing / 特殊元素间距')

    zr = sub.add_parser('zregex', aliases=['zr'], help='Regular expression search in compressed files / 压缩文件正则搜索')
    zr.add_argument('pattern')
    zr.add_argument('files', nargs='+')
    zr.add_argument('--tau', type=_positive, default=None)
    zr.add_argument('--no-empty', action='store_true')

    # 基准子命令 / bench: stub parser, full help lives in tools.bench
    sub.add_parser('bench', aliases=['b'], add_help=False,
                   help='Benchmarks (details: python patmat_cli.py bench -h) / 基准测试')
    return parser


def _read_tree(path: str):
    from patmat.trees import parse_tree
    return parse_tree(Path(path).read_text(encoding="utf-8").strip())


def _read_bytes(path: str) -> bytes:
    return Path(path).read_bytes()


def _positions_line(path: str, found: Sequence[int], many: bool) -> str:
    text = " ".join(str(j) for j in found)
    return f"{path}: {text}" if many else text


def _map_files(cli: CliConfig, fn: Callable[[str], Any], files: List[str]) -> List[Any]:
    """Apply fn to every file, in parallel when configured; results keep input order."""
    if cli.config.threads <= 1 or len(files) == 1:
        return [fn(f) for f in files]
    with ThreadPoolExecutor(max_workers=cli.config.threads) as pool:
        return list(pool.map(fn, files))


def _logged(cli: CliConfig, params: Dict[str, Any], run: Callable[[], Any],
            count: Callable[[Any], int]) -> Any:
    log_id = cli.logger.log_search_start(cli.cmd, params) if cli.logger else None
    start = time.perf_counter()
    try:
        result = run()
    except Exception as e:
        if cli.logger:
            cli.logger.log_search_result(log_id, cli.cmd, 0, time.perf_counter() - start,
                                         success=False, error=str(e))
        raise
    if cli.logger:
        cli.logger.log_search_result(log_id, cli.cmd, count(result), time.perf_counter() - start)
    return result


def _search_files(cli: CliConfig, params: Dict[str, Any], files: List[str],
                  fn: Callable[[str], List[int]]) -> int:
    results = _logged(cli, dict(params, files=files), lambda: _map_files(cli, fn, files),
                      lambda rs: sum(len(r) for r in rs))
    for path, found in zip(files, results):
        cli.emit({"file": path, "matches": found}, _positions_line(path, found, len(files) > 1))
    return EXIT_OK if any(results) else EXIT_NO_MATCH


def _tree_distance(args, cli: CliConfig) -> int:
    from patmat.trees import TableCost, UnitCost, alignment_distance, zhang_shasha
    cost = TableCost.from_file(args.costs) if args.costs else UnitCost()
    t1, t2 = _read_tree(args.a), _read_tree(args.b)
    fn = zhang_shasha if cli.cmd == 'tree-ed' else alignment_distance
    value = _logged(cli, {"a": args.a, "b": args.b}, lambda: fn(t1, t2, cost), lambda _: 1)
    if float(value).is_integer():
        value = int(value)
    cli.emit({"distance": value}, str(value))
    return EXIT_OK


def _tree_incl(args, cli: CliConfig) -> int:
    from patmat.trees import TreeIndex, emb, including_subtrees
    p, t = _read_tree(args.pattern), _read_tree(args.text)
    ix = TreeIndex(t)
    occurrences = _logged(cli, {"pattern": args.pattern, "text": args.text},
                          lambda: emb(p, t, ix), len)
    included = bool(occurrences)
    roots = [ix.pre[v] + 1 for v in including_subtrees(p, t, ix)] if args.report_roots else []
    record: Dict[str, Any] = {"included": included}
    if args.report_roots:
        record["roots"] = roots
        text = " ".join(str(r) for r in roots)
    else:
        text = "included" if included else "not included"
    cli.emit(record, text)
    return EXIT_OK if included else EXIT_NO_MATCH


def _tps(args, cli: CliConfig) -> int:
    from patmat.trees import tps_fast, tps_simple
    p, t = _read_tree(args.pattern), _read_tree(args.text)
    if args.fast:
        s = args.micro_size or cli.config.micro_size
        run = lambda: tps_fast(p, t, s, cli.config.fr_budget, cli.config.word_bits)
    else:
        run = lambda: tps_simple(p, t)
    pairs = sorted(_logged(cli, {"pattern": args.pattern, "text": args.text, "fast": args.fast}, run, len),
                   key=lambda ij: (ij[1], ij[0]))
    if cli.output == "json":
        cli.emit({"pairs": [list(ij) for ij in pairs]}, "")
    else:
        for i, j in pairs:
            print(f"p{i} ⊑ t{j}")
    return EXIT_OK if pairs else EXIT_NO_MATCH


def _regex(args, cli: CliConfig) -> int:
    from patmat.regex import build_engine
    engine = build_engine(args.pattern, args.engine, cli.config, cli.notice)
    params = {"pattern": args.pattern, "engine": engine.name}
    return _search_files(cli, params, args.files,
                         lambda f: engine.find_matches(_read_bytes(f), allow_empty=not args.no_empty))


def _ed(args, cli: CliConfig) -> int:
    from patmat.strings import edit_distance, edit_distance_fr
    if args.fr:
        value = edit_distance_fr(args.a, args.b, word_bits=cli.config.word_bits, notice=cli.notice)
    else:
        value = edit_distance(args.a, args.b)
    cli.emit({"distance": value}, str(value))
    return EXIT_OK


def _agrep(args, cli: CliConfig) -> int:
    from patmat.strings import approx_positions
    p = args.pattern.encode("utf-8")
    return _search_files(cli, {"pattern": args.pattern, "k": args.k}, args.files,
                         lambda f: approx_positions(p, _read_bytes(f), args.k))


def _aregex(args, cli: CliConfig) -> int:
    from patmat.regex import approx_regex

    def run(path: str):
        return approx_regex(args.pattern, _read_bytes(path), args.d,
                            mode="whole" if args.whole else "substring",
                            x=cli.config.cluster_size, budget=cli.config.fr_budget)

    if not args.whole:
        return _search_files(cli, {"pattern": args.pattern, "d": args.d}, args.files,
                             lambda f: run(f).positions)
    params = {"pattern": args.pattern, "d": args.d, "files": args.files, "mode": "whole"}
    results = _logged(cli, params, lambda: _map_files(cli, run, args.files),
                      lambda rs: sum(r.accepted for r in rs))
    many = len(args.files) > 1
    for path, r in zip(args.files, results):
        text = f"{r.distance} {'accepted' if r.accepted else 'rejected'}"
        cli.emit({"file": path, "distance": r.distance, "accepted": r.accepted},
                 f"{path}: {text}" if many else text)
    return EXIT_OK if any(r.accepted for r in results) else EXIT_NO_MATCH


def _subseq(args, cli: CliConfig) -> int:
    from patmat.strings import build_index, is_subsequence, load_index, save_index
    if args.action == 'build':
        ix = build_index(_read_bytes(args.file))
        save_index(ix, args.out)
        cli.emit({"action": "build", "index": args.out, "length": ix.n, "sigma": ix.sigma},
                 f"Index written: {args.out} ({ix.n} bytes, σ={ix.sigma}) / 索引已生成")
        return EXIT_OK
    ix = load_index(args.index)
    found = _logged(cli, {"index": args.index, "pattern": args.pattern},
                    lambda: is_subsequence(ix, args.pattern.encode("utf-8")), int)
    cli.emit({"action": "query", "subsequence": found}, "yes" if found else "no")
    return EXIT_OK if found else EXIT_NO_MATCH


def _zl(args, cli: CliConfig) -> int:
    from patmat.zl import compress, decompress, load_container, save_container
    if args.action == 'compress':
        z = compress(_read_bytes(args.file), args.scheme)
        save_container(z, args.out)
        cli.emit({"action": "compress", "scheme": z.scheme, "elements": z.n, "length": z.length,
                  "out": args.out},
                 f"Compressed {z.length} bytes into {z.n} {z.scheme} elements: {args.out} / 压缩完成")
        return EXIT_OK
    data = decompress(load_container(args.file))
    write_bytes_atomic(args.out, data)
    cli.emit({"action": "decompress", "length": len(data), "out": args.out},
             f"Decompressed {len(data)} bytes: {args.out} / 解压完成")
    return EXIT_OK


def _zgrep(args, cli: CliConfig) -> int:
    from patmat.zl import capprox_search, load_container
    tau = args.tau or cli.config.tau
    return _search_files(cli, {"pattern": args.pattern, "k": args.k, "tau": tau}, args.files,
                         lambda f: capprox_search(load_container(f), args.pattern, args.k, tau))


def _zregex(args, cli: CliConfig) -> int:
    from patmat.regex import parse_regex, thompson
    from patmat.zl import cregex_search, load_container
    tau = args.tau or cli.config.tau
    tnfa = thompson(parse_regex(args.pattern))
    return _search_files(cli, {"pattern": args.pattern, "tau": tau}, args.files,
                         lambda f: cregex_search(load_container(f), tnfa, tau,
                                                 allow_empty=not args.no_empty))


HANDLERS: Dict[str, Callable[[argparse.Namespace, CliConfig], int]] = {
    'tree-ed': _tree_distance,
    'tree-align': _tree_distance,
    'tree-incl': _tree_incl,
    'tps': _tps,
    'regex': _regex,
    'ed': _ed,
    'agrep': _agrep,
    'aregex': _aregex,
    'subseq': _subseq,
    'zl': _zl,
    'zgrep': _zgrep,
    'zregex': _zregex,
}


def _run_tool(cmd: str, argv: List[str]) -> int:
    # 采用 argv 切片，将子命令后的所有参数原样转发至具体工具（包括 -h）
    tokens = {cmd} | {alias for alias, name in ALIAS_MAP.items() if name == cmd}
    idx = next(i for i, tok in enumerate(argv) if tok in tokens)
    mod_name, func_name = TOOLS[cmd]
    func = getattr(importlib.import_module(mod_name), func_name)
    return func(argv[idx + 1:]) or EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if not argv:
        parser.print_help()
        return EXIT_USAGE
    try:
        args, unknown = parser.parse_known_args(argv)
        # 统一别名映射，防止 argparse 返回别名值导致匹配失败
        args.cmd = ALIAS_MAP.get(args.cmd, args.cmd)
        if args.cmd not in TOOLS and unknown:
            parser.error(f"unrecognized arguments: {' '.join(unknown)}")
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    if args.cmd is None:
        parser.print_help()
        return EXIT_USAGE
    if args.cmd in TOOLS:
        return _run_tool(args.cmd, argv)

    overrides = {
        "PATMAT_WORD_BITS": str(args.word_bits) if args.word_bits else None,
        "PATMAT_THREADS": str(args.threads) if args.threads else None,
        "PATMAT_LOG_DIR": args.log_dir,
    }
    try:
        config = load_env_config(args.env, overrides)
    except ValueError:
        return EXIT_USAGE
    logger = SearchLogger(config.log_dir, echo=False) if config.log_enabled else None
    cli = CliConfig(args.cmd, config, "json" if args.json else "text", logger)

    try:
        return HANDLERS[args.cmd](args, cli)
    except CorruptContainerError as e:
        print(f"❌ Corrupt container: {e} / 容器数据损坏", file=sys.stderr)
        return EXIT_CORRUPT
    except ValueError as e:
        print(f"❌ {e} / 输入无效", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"❌ I/O error: {e} / 读写失败", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
