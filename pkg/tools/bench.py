#!/usr/bin/env python3
"""Benchmark harness / 基准测试工具 (Markdown + JSON report)

Suites time the library on seeded random inputs and write
`reports/bench_<timestamp>/bench.md` plus `results.json`. Timings are medians
over `--repeat` runs; they are informational and never gate anything.

Suites / 测试集:
- regex-engines: ns/char per engine, for automata below √w, below w and above w states
- zl: compression ratio, compressed search throughput and retained-object counter per τ
- trees: edit / alignment distance, inclusion and path subsequence on random trees
- approx: plain vs Four-Russians edit distance, approximate string and regex search

Optional charts / 可选图表: enabled with `--charts` (matplotlib required / 需要 matplotlib)。
"""
from __future__ import annotations
import argparse, datetime, os, random, sys
from typing import Any, Callable, Dict, List, Optional

from patmat.core import PatmatConfig, load_env_config
from patmat.utils import create_logger, log_execution_time, now_iso, read_json_safe, timed_median, write_json_atomic

Row = Dict[str, Any]


def _text(rng: random.Random, n: int, alphabet: bytes = b"ab") -> bytes:
    return bytes(rng.choice(alphabet) for _ in range(n))


def _regex(rng: random.Random, literals: int) -> str:
    if literals == 1:
        return rng.choice("ab")
    k = rng.randint(1, literals - 1)
    text = "(" + _regex(rng, k) + rng.choice(("", "|")) + _regex(rng, literals - k) + ")"
    return text + "*" if rng.random() < 0.2 else text


def _tree(rng: random.Random, n: int, labels: str = "abc"):
    from patmat.trees import LabeledTree
    children: List[List[int]] = [[] for _ in range(n)]
    for v in range(1, n):
        children[rng.randrange(v)].append(v)
    return LabeledTree([rng.choice(labels) for _ in range(n)], children)


def _row(suite: str, case: str, variant: str, seconds: float, **extra: Any) -> Row:
    row: Row = {'suite': suite, 'case': case, 'variant': variant, 'seconds': round(seconds, 6)}
    row.update(extra)
    return row


def bench_regex_engines(cfg: PatmatConfig, rng: random.Random, size: int, repeat: int) -> List[Row]:
    """ns/char per engine in each m regime"""
    from patmat.regex import ENGINE_KINDS, build_engine
    q = _text(rng, size)
    rows = []
    # literal counts chosen so the automaton lands in each regime of select_engine
    w = cfg.word_bits
    for regime, literals in (('m<=sqrt(w)', max(1, int(w ** 0.5) // 4)),
                             ('m<=w', max(2, w // 4)),
                             ('m>w', w)):
        pattern = _regex(rng, literals)
        for kind in ENGINE_KINDS + ('auto',):
            engine = build_engine(pattern, kind, cfg)
            t, found = timed_median(engine.find_matches, q, repeat=repeat)
            rows.append(_row('regex-engines', regime, engine.name if kind != 'auto' else f'auto:{engine.name}', t,
                             m=engine.tnfa.size, ns_per_char=round(t * 1e9 / max(1, size), 1),
                             matches=len(found), fallback=engine.fallback))
    return rows


def bench_zl(cfg: PatmatConfig, rng: random.Random, size: int, repeat: int) -> List[Row]:
    """compression ratio, compressed search throughput, retained objects"""
    from patmat.zl import CSearchStats, capprox_search, compress, cregex_search, encode_container
    q = _text(rng, size, b"acgt")
    rows = []
    for scheme in ('zl78', 'zlw'):
        t, z = timed_median(compress, q, scheme, repeat=repeat)
        ratio = len(encode_container(z)) / max(1, len(q))
        rows.append(_row('zl', 'compress', scheme, t, elements=z.n, ratio=round(ratio, 4)))
        for tau in (1, 4, 16):
            t, found = timed_median(capprox_search, z, b"acgtacgtac", 1, tau, repeat=repeat)
            stats = CSearchStats()
            capprox_search(z, b"acgtacgtac", 1, tau, stats)
            rows.append(_row('zl', f'zgrep tau={tau}', scheme, t, matches=len(found),
                             mb_per_s=round(size / max(t, 1e-9) / 1e6, 3), retained=stats.retained))
        t, found = timed_median(cregex_search, z, "a(c|g)*t", cfg.tau, repeat=repeat)
        rows.append(_row('zl', f'zregex tau={cfg.tau}', scheme, t, matches=len(found),
                         mb_per_s=round(size / max(t, 1e-9) / 1e6, 3)))
    return rows


def bench_trees(cfg: PatmatConfig, rng: random.Random, size: int, repeat: int) -> List[Row]:
    """tree distances, inclusion and path subsequence"""
    from patmat.trees import alignment_distance, emb, tps_fast, tps_simple, zhang_shasha
    rows = []
    n = max(8, min(size // 200, 200))
    t1, t2 = _tree(rng, n), _tree(rng, n)
    text = _tree(rng, n * 10)
    pattern = _tree(rng, 6)
    for name, fn, args in (('zhang-shasha', zhang_shasha, (t1, t2)),
                           ('alignment', alignment_distance, (t1, t2)),
                           ('emb', emb, (pattern, text)),
                           ('tps-simple', tps_simple, (pattern, text)),
                           ('tps-fast', tps_fast, (pattern, text, cfg.micro_size, cfg.fr_budget, cfg.word_bits))):
        t, result = timed_median(fn, *args, repeat=repeat)
        value = result if isinstance(result, (int, float)) else len(result)
        rows.append(_row('trees', f'n={n}' if name in ('zhang-shasha', 'alignment') else f'n_T={n * 10}',
                         name, t, result=value))
    return rows


def bench_approx(cfg: PatmatConfig, rng: random.Random, size: int, repeat: int) -> List[Row]:
    """edit distance, approximate string and regex search"""
    from patmat.regex import approx_regex
    from patmat.strings import CellTable, approx_positions, edit_distance, edit_distance_fr
    rows = []
    n = max(16, min(size // 20, 1000))
    s, t = _text(rng, n, b"acgt"), _text(rng, n, b"acgt")
    tm, d = timed_median(edit_distance, s, t, repeat=repeat)
    rows.append(_row('approx', f'ed n={n}', 'plain', tm, result=d))
    table = CellTable()
    tm, d = timed_median(edit_distance_fr, s, t, 4, 4, cfg.word_bits, table, repeat=repeat)
    rows.append(_row('approx', f'ed n={n}', 'four-russians', tm, result=d, cells=len(table.table)))
    q = _text(rng, size, b"acgt")
    tm, found = timed_median(approx_positions, b"acgtacgt", q, 2, repeat=repeat)
    rows.append(_row('approx', f'agrep k=2 n={size}', 'sellers', tm, matches=len(found)))
    small = q[:max(1, size // 10)]
    tm, res = timed_median(approx_regex, "a(c|g)*ta", small, 1, x=cfg.cluster_size, budget=cfg.fr_budget,
                           repeat=repeat)
    rows.append(_row('approx', f'aregex d=1 n={len(small)}', 'two-pass', tm, matches=len(res.positions)))
    return rows


SUITES: Dict[str, Callable[[PatmatConfig, random.Random, int, int], List[Row]]] = {
    'regex-engines': bench_regex_engines,
    'zl': bench_zl,
    'trees': bench_trees,
    'approx': bench_approx,
}


def _key(row: Row) -> str:
    return f"{row['suite']}|{row['case']}|{row['variant']}"


def render_charts(rows: List[Row], base_dir: str) -> Dict[str, Any]:
    """One bar chart per suite; failures are reported, never raised."""
    out: Dict[str, Any] = {'charts': []}
    try:
        import matplotlib
        matplotlib.use('Agg')
        import matplotlib.pyplot as plt
        for suite in sorted({r['suite'] for r in rows}):
            picked = [r for r in rows if r['suite'] == suite]
            plt.figure(figsize=(10, 4))
            plt.bar([f"{r['case']}\n{r['variant']}" for r in picked], [r['seconds'] * 1000 for r in picked])
            plt.xticks(rotation=45, ha='right', fontsize=7)
            plt.ylabel('ms (median)')
            plt.title(f'{suite} timings')
            plt.tight_layout()
            path = os.path.join(base_dir, f'chart_{suite}.png')
            plt.savefig(path); plt.close()
            out['charts'].append(path)
    except Exception as e:
        out['chart_error'] = f'Chart generation failed: {e}'
    return out


def write_markdown(summary: Dict[str, Any], path: str, previous: Optional[Dict[str, Any]] = None) -> None:
    prev = {_key(r): r for r in (previous or {}).get('rows', [])}
    lines = []
    lines.append('# patmat Benchmark Report / 基准测试报告')
    lines.append('')
    lines.append(f"Generated at / 生成时间: {summary['generated_at']}")
    lines.append(f"Suites / 测试集: {', '.join(summary['suites'])}")
    lines.append(f"Text size / 文本长度: {summary['size']}  Repeat / 重复次数: {summary['repeat']}  "
                 f"Word bits / 字长: {summary['word_bits']}")
    lines.append('')
    for suite in summary['suites']:
        picked = [r for r in summary['rows'] if r['suite'] == suite]
        extras = sorted({k for r in picked for k in r} - {'suite', 'case', 'variant', 'seconds'})
        lines.append(f'## {suite}')
        header = ['Case', 'Variant', 'Median ms'] + extras + (['Prev ms'] if prev else [])
        lines.append(' | '.join(header))
        lines.append('---|---|' + '|'.join(['---:'] * (len(header) - 2)))
        for r in picked:
            cells = [r['case'], r['variant'], f"{r['seconds'] * 1000:.3f}"] + [str(r.get(k, '')) for k in extras]
            if prev:
                old = prev.get(_key(r))
                cells.append(f"{old['seconds'] * 1000:.3f}" if old else '-')
            lines.append(' | '.join(cells))
        lines.append('')
    if summary.get('charts'):
        lines.append('## Charts / 图表')
        for p in summary['charts']:
            lines.append(f"![{os.path.basename(p)}]({os.path.basename(p)})")
    if summary.get('chart_error'):
        lines.append(summary['chart_error'])
    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write('\n'.join(lines) + '\n')


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog='patmat bench', description='Run timing suites / 运行基准测试')
    p.add_argument('suites', nargs='*', help=f"suites: {', '.join(SUITES)} / 测试集")
    p.add_argument('-r', '--repeat', type=int, default=3, help='runs per measurement (default: 3) / 每项重复次数')
    p.add_argument('-n', '--size', type=int, default=20000, help='random text size in bytes (default: 20000) / 文本长度')
    p.add_argument('-o', '--out', help='report directory (default: reports/bench_TIMESTAMP) / 报告目录')
    p.add_argument('-c', '--charts', action='store_true', help='Generate charts (requires matplotlib) / 生成图表（需要 matplotlib）')
    p.add_argument('--compare', help='previous results.json to compare against / 对比的历史结果')
    p.add_argument('--seed', type=int, default=1)
    p.add_argument('-e', '--env', default='.env', help='Path to env file (default: .env) / 环境变量文件路径')
    args = p.parse_args(argv)

    if not args.suites:
        print('Available suites / 可用测试集:')
        for name, fn in SUITES.items():
            print(f"  {name:<14} {(fn.__doc__ or '').strip()}")
        return 0
    unknown = [s for s in args.suites if s not in SUITES]
    if unknown:
        print(f"❌ Unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)} / 未知测试集", file=sys.stderr)
        return 2
    if args.repeat < 1 or args.size < 1:
        print('❌ --repeat and --size must be >= 1 / 参数必须 >= 1', file=sys.stderr)
        return 2

    try:
        cfg = load_env_config(args.env)
    except ValueError:
        return 2
    log = create_logger(cfg.log_dir, 'bench') if cfg.log_enabled else None
    base_dir = args.out or os.path.join('reports', 'bench_' + datetime.datetime.now().strftime('%Y-%m-%d_%H-%M-%S'))
    os.makedirs(base_dir, exist_ok=True)

    rows: List[Row] = []
    for suite in args.suites:
        if log:
            log.log(f"bench {suite} start size={args.size} repeat={args.repeat}")
        run = log_execution_time(log.log if log else print)(SUITES[suite])
        got = run(cfg, random.Random(args.seed), args.size, args.repeat)
        rows.extend(got)
        if log:
            log.log(f"bench {suite} done rows={len(got)}")
        print(f"✅ {suite}: {len(got)} measurements / 完成")

    summary: Dict[str, Any] = {
        'generated_at': now_iso(),
        'suites': args.suites,
        'size': args.size,
        'repeat': args.repeat,
        'word_bits': cfg.word_bits,
        'rows': rows,
    }
    if args.charts:
        summary.update(render_charts(rows, base_dir))
    previous = read_json_safe(args.compare, {}) if args.compare else None
    write_json_atomic(os.path.join(base_dir, 'results.json'), summary, backup=False)
    out_md = os.path.join(base_dir, 'bench.md')
    write_markdown(summary, out_md, previous)
    print(f"Markdown report written: {out_md} / 基准报告已生成")
    return 0


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
