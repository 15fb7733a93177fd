"""KLT1 binary cache of Kloosterman tables.

Layout: b"KLT1", p as little-endian u64, then p-1 little-endian binary64
values S(a,1;p) for a = 1..p-1.
"""

from __future__ import annotations

import math
import os
import random
import struct
from pathlib import Path

import numpy as np

from .kloosterman import EPS, KloostermanTable, kloosterman_sum, kloosterman_table
from .modarith import PrimeModulus, as_prime

MAGIC = b"KLT1"
_HEADER = struct.Struct("<4sQ")
ENV_VAR = "KLOOSTER_CACHE"
DEFAULT_DIR = ".klooster-cache"
SPOT_CHECKS = 10
SPOT_TOL = 1e-9


class CacheError(OSError):
    """Cache file missing, truncated or inconsistent."""


def encode(table: KloostermanTable) -> bytes:
    return _HEADER.pack(MAGIC, table.p.p) + table.values.astype("<f8").tobytes()


def decode(data: bytes) -> KloostermanTable:
    if len(data) < _HEADER.size:
        raise CacheError("file shorter than the KLT1 header")
    magic, p = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheError(f"bad magic {magic!r}")
    expected = _HEADER.size + 8 * (p - 1)
    if len(data) != expected:
        raise CacheError(f"expected {expected} bytes for p={p}, found {len(data)}")
    values = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).astype(np.float64)
    pm = PrimeModulus(p)
    return KloostermanTable(pm, values, "cache", EPS * (0.3 * p + 4.0 * math.sqrt(p) + 1.0))


def write_table(path: str | os.PathLike, table: KloostermanTable) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(encode(table))
    os.replace(tmp, path)


def read_table(path: str | os.PathLike) -> KloostermanTable:
    return decode(Path(path).read_bytes())


def spot_check(table: KloostermanTable, count: int = SPOT_CHECKS, seed: int | None = None) -> float:
    """Largest |cached - recomputed| / sqrt(p) over random entries."""
    n = table.p.p
    rng = random.Random(n if seed is None else seed)
    worst = 0.0
    for a in rng.sample(range(1, n), min(count, n - 1)):
        worst = max(worst, abs(table[a] - kloosterman_sum(a, 1, table.p)) / math.sqrt(n))
    return worst


def default_cache_dir() -> Path:
    return Path(os.environ.get(ENV_VAR) or DEFAULT_DIR)


class TableCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()

    def path_for(self, p: int | PrimeModulus) -> Path:
        return self.directory / f"p{int(p)}.klt"

    def load(self, p: int | PrimeModulus) -> KloostermanTable | None:
        """Cached table if present and consistent, else None."""
        path = self.path_for(p)
        if not path.exists():
            return None
        try:
            table = read_table(path)
        except CacheError:
            return None
        if table.p.p != int(p) or spot_check(table) > SPOT_TOL:
            return None
        return table

    def get(self, p: int | PrimeModulus, store: bool = True) -> tuple[KloostermanTable, bool]:
        """(table, hit).  Computes and stores on a miss."""
        pm = as_prime(p)
        table = self.load(pm)
        if table is not None:
            return table, True
        table = kloosterman_table(pm)
        if store:
            write_table(self.path_for(pm), table)
        return table, False
