from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional
import os


@dataclass
class PatmatConfig:
    word_bits: int = 64  # emulated machine word w
    fr_budget: int = 65536  # cap on Four-Russians table entries
    micro_size: int = 16  # TPS micro-tree size s
    tau: int = 8  # special-element spacing for compressed search
    cluster_size: int = 64  # state cap x of nested decomposition
    log_dir: str = "logs"
    log_enabled: bool = True
    threads: int = 1  # file-level parallelism for the CLI


def _parse_bool(v: Optional[str], default: bool) -> bool:
    if v is None:
        return default
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on", "t", "y"):
        return True
    if s in ("0", "false", "no", "off", "f", "n"):
        return False
    return default


def _read_env_file(env_path: str, env: Dict[str, str]) -> None:
    try:
        with open(env_path, "r", encoding="utf-8") as f:
            lines = f.readlines()
    except (IOError, OSError):
        return
    for line in lines:
        line = line.rstrip("\n")
        if not line or line.strip().startswith("#"):
            continue
        if "=" in line:
            k, v = line.split("=", 1)
            env[k.strip()] = v.strip()


def _int(env: Dict[str, str], key: str, default: int, minimum: int) -> int:
    raw = env.get(key)
    try:
        value = int(raw or default)
    except ValueError:
        print(f"❌ Config error: {key}={raw!r} is not an integer / 配置错误：{key} 不是整数")
        raise ValueError(f"{key} must be an integer, got {raw!r}")
    if value < minimum:
        print(f"❌ Config error: {key}={value} < {minimum} / 配置错误：{key} 取值过小")
        raise ValueError(f"{key} must be >= {minimum}, got {value}")
    return value


def load_env_config(env_path: str = ".env", overrides: Optional[Dict[str, str]] = None) -> PatmatConfig:
    """
    Build a PatmatConfig from the environment and an optional env file.
    从环境变量与 .env 文件加载配置

    Args:
        env_path: env file; its KEY=VALUE lines override os.environ
        overrides: values applied last (used by CLI flags)

    Raises:
        ValueError: a value is not an integer or is out of range
    """
    env: Dict[str, str] = {}
    for key in os.environ:
        env[key] = os.environ[key]
    if env_path and os.path.exists(env_path):
        _read_env_file(env_path, env)
    if overrides:
        env.update({k: v for k, v in overrides.items() if v is not None})

    word_bits = _int(env, "PATMAT_WORD_BITS", 64, 4)
    fr_budget = _int(env, "PATMAT_FR_BUDGET", 65536, 1)
    micro_size = _int(env, "PATMAT_MICRO_SIZE", min(16, max(2, word_bits // 4)), 2)
    if micro_size > word_bits:
        print(f"❌ Config error: micro size {micro_size} exceeds word bits {word_bits} / 微树大小超过字长")
        raise ValueError(f"PATMAT_MICRO_SIZE must be <= word bits ({word_bits})")
    tau = _int(env, "PATMAT_TAU", 8, 1)
    cluster_size = _int(env, "PATMAT_CLUSTER_SIZE", max(6, word_bits), 6)
    threads = _int(env, "PATMAT_THREADS", 1, 1)

    return PatmatConfig(
        word_bits=word_bits,
        fr_budget=fr_budget,
        micro_size=micro_size,
        tau=tau,
        cluster_size=cluster_size,
        log_dir=env.get("PATMAT_LOG_DIR") or "logs",
        log_enabled=_parse_bool(env.get("PATMAT_LOG_ENABLED"), True),
        threads=threads,
    )
