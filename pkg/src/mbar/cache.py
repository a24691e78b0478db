"""Plain-text cache of Betti tables.

Format::

    MBARCACHE v1
    3: 1
    4: 1,1
    5: 1,5,1

Records are sorted by ``n``, coefficients ascend in degree, and every record
must pass Betti-table validation when loaded.
"""
from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Dict, Mapping, Union

from .errors import CacheError, InvariantViolation
from .lpoly import BettiTable

HEADER = "MBARCACHE v1"

PathLike = Union[str, os.PathLike]


def dumps(tables: Mapping[int, BettiTable]) -> str:
    lines = [HEADER]
    for n in sorted(tables):
        lines.append(f"{n}: " + ",".join(str(r) for r in tables[n].ranks))
    return "\n".join(lines) + "\n"


def loads(text: str) -> Dict[int, BettiTable]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise CacheError(f"bad cache header: {lines[0] if lines else '<empty file>'!r}")
    tables: Dict[int, BettiTable] = {}
    last = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            key, _, body = line.partition(":")
            n = int(key)
            ranks = [int(x) for x in body.split(",")]
        except ValueError as exc:
            raise CacheError(f"line {lineno}: cannot parse {line!r}") from exc
        if last is not None and n <= last:
            raise CacheError(f"line {lineno}: records out of order or duplicated at n={n}")
        try:
            tables[n] = BettiTable(n, ranks)
        except InvariantViolation as exc:
            raise CacheError(f"line {lineno}: {exc}") from exc
        last = n
    return tables


def load(path: PathLike) -> Dict[int, BettiTable]:
    """Read a cache file; a missing file is an empty cache."""
    p = Path(path)
    if not p.exists():
        return {}
    return loads(p.read_text(encoding="ascii"))


def save(path: PathLike, tables: Mapping[int, BettiTable]) -> None:
    """Atomically replace ``path`` with the given tables."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=p.name + ".", suffix=".tmp", dir=p.parent)
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(dumps(tables))
        os.replace(tmp, p)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def merge(existing: Mapping[int, BettiTable], new: Mapping[int, BettiTable]) -> Dict[int, BettiTable]:
    """Union of two caches; a disagreeing record raises :class:`CacheError`."""
    out = dict(existing)
    for n, table in new.items():
        old = out.get(n)
        if old is not None and old.ranks != table.ranks:
            raise CacheError(f"cache mismatch at n={n}: cached {list(old.ranks)}, computed {list(table.ranks)}")
        out[n] = table
    return out
