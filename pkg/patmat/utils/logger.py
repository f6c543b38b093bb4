"""
Search logging
搜索日志

Line logs with size-capped rotation, JSON-line records for searches, and a
per-command counter file. Logging failures are reported on stderr and never
abort a search.
"""
from __future__ import annotations

import sys
import json
import datetime as dt
from pathlib import Path
from typing import Optional, Dict, Any

from .file_ops import read_json_safe, write_json_atomic


def _stamp(fmt: str = "%Y-%m-%d %H:%M:%S") -> str:
    return dt.datetime.now().strftime(fmt)


class RotatingLogger:
    """按大小轮转的行日志; 超过上限时只保留末尾 keep_lines 行"""

    def __init__(self, log_path: str, max_size_mb: float = 2.0, backup_lines: int = 1000,
                 stats_file: Optional[str] = None, echo: bool = True):
        """
        Args:
            log_path: log file / 日志文件
            max_size_mb: size that triggers trimming / 触发裁剪的大小(MB)
            backup_lines: lines kept after trimming / 裁剪后保留的行数
            stats_file: JSON counters, optional / 计数文件（可选）
            echo: mirror structured records to stderr / 结构化记录回显到 stderr
        """
        self.path = Path(log_path)
        self.limit = int(max_size_mb * 1024 * 1024)
        self.keep_lines = backup_lines
        self.stats_path = Path(stats_file) if stats_file else None
        self.echo = echo
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            print(f"Log directory error / 日志目录错误: {e}", file=sys.stderr)

    def _append(self, line: str) -> None:
        self._trim()
        with self.path.open("a", encoding="utf-8") as f:
            f.write(f"[{_stamp()}] {line.rstrip()}\n")

    def _trim(self) -> None:
        try:
            if self.path.stat().st_size <= self.limit:
                return
            tail = self.path.read_text(encoding="utf-8", errors="replace").splitlines(True)
            self.path.write_text("".join(tail[-self.keep_lines:]), encoding="utf-8")
        except FileNotFoundError:
            pass
        except OSError as e:
            print(f"Log rotation error / 日志轮转失败: {e}", file=sys.stderr)

    def log(self, message: str) -> None:
        try:
            self._append(message)
        except OSError as e:
            print(f"Logging error: {e} - {message}", file=sys.stderr)

    def log_structured(self, record: Dict[str, Any]) -> None:
        """Write one record as a JSON line / 写入一条 JSON 行记录"""
        record.setdefault("timestamp", dt.datetime.now().isoformat())
        try:
            self._append(json.dumps(record, ensure_ascii=False, default=str))
        except OSError as e:
            print(f"Structured logging error: {e} - {record}", file=sys.stderr)
            return
        if self.echo:
            print(f"[{_stamp()}] STRUCTURED_LOG: {record.get('type', '?')}.{record.get('action', '?')}"
                  f" - {record.get('log_id', 'N/A')}", file=sys.stderr)

    def update_stats(self, category: str, success: bool) -> None:
        if self.stats_path is None:
            return
        stats = self.get_stats()
        counters = stats.setdefault(category, {"total": 0, "success": 0, "failed": 0})
        counters["total"] += 1
        counters["success" if success else "failed"] += 1
        stats["last_updated"] = dt.datetime.now().isoformat()
        try:
            write_json_atomic(str(self.stats_path), stats, backup=False)
        except OSError as e:
            print(f"Stats update error / 统计写入失败: {e}", file=sys.stderr)

    def get_stats(self) -> Dict[str, Any]:
        if self.stats_path is None:
            return {}
        stats = read_json_safe(str(self.stats_path), {})
        return stats if isinstance(stats, dict) else {}


class SearchLogger:
    """Start / result records for each CLI search / 记录每次搜索的开始与结果"""

    def __init__(self, log_dir: str = "logs", echo: bool = True):
        self.log_dir = Path(log_dir)
        self.logger = RotatingLogger(
            str(self.log_dir / "search_operations.log"),
            max_size_mb=5.0,
            backup_lines=2000,
            stats_file=str(self.log_dir / "search_stats.json"),
            echo=echo,
        )

    def _generate_log_id(self, prefix: str) -> str:
        return f"{prefix}_{_stamp('%Y%m%d_%H%M%S_%f')}"

    def log_search_start(self, kind: str, params: Dict[str, Any]) -> str:
        """Returns the id that ties the result record to this start / 返回日志ID"""
        log_id = self._generate_log_id(kind.replace("-", "_"))
        self.logger.log_structured({"log_id": log_id, "type": kind, "action": "start", **params})
        return log_id

    def log_search_result(self, log_id: str, kind: str, matches: int, elapsed: float,
                          success: bool = True, error: Optional[str] = None) -> None:
        self.logger.log_structured({
            "log_id": log_id,
            "type": kind,
            "action": "result",
            "success": success,
            "matches": matches,
            "elapsed_s": round(elapsed, 6),
            "error": error,
        })
        self.logger.update_stats(kind, success)

    def log_notice(self, message: str) -> None:
        """Engine fallbacks (Four-Russians over budget, scatter Move) / 引擎回退提示"""
        self.logger.log(f"NOTICE {message}")

    def get_stats(self) -> Dict[str, Any]:
        return self.logger.get_stats()


def create_logger(log_dir: str, name_prefix: str = "patmat") -> RotatingLogger:
    """One log file per day: <log_dir>/<prefix>_YYYY-MM-DD.log / 按日分文件"""
    return RotatingLogger(str(Path(log_dir) / f"{name_prefix}_{_stamp('%Y-%m-%d')}.log"))


def now_iso() -> str:
    return _stamp("%Y-%m-%dT%H:%M:%S")
