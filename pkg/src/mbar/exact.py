"""Exact integer/rational primitives: Stirling triangles, binomials, power sums,
compositions.

Python ``int`` and :class:`fractions.Fraction` serve as the arbitrary-precision
integer and rational types.  Memo tables are grown under a lock and read
without one, so these functions are safe to call from worker threads.
"""
from __future__ import annotations

import threading
from math import comb
from typing import Iterator, List, Tuple

__all__ = [
    "stirling_first_signed",
    "stirling_second",
    "binomial",
    "power_sum",
    "compositions",
    "count_compositions",
]


class _Triangle:
    """Triangular memo table ``rows[a][b]`` grown row by row on demand."""

    def __init__(self, step):
        self._step = step
        self._rows: List[List[int]] = [[1]]
        self._lock = threading.Lock()

    def get(self, a: int, b: int) -> int:
        if a < 0 or b < 0 or b > a:
            return 0
        rows = self._rows
        if a >= len(rows):
            with self._lock:
                rows = self._rows
                while len(rows) <= a:
                    rows.append(self._step(rows[-1], len(rows)))
        return rows[a][b]

    def clear(self) -> None:
        with self._lock:
            self._rows = [[1]]


def _first_kind_row(prev: List[int], a: int) -> List[int]:
    # s(a, b) = s(a-1, b-1) - (a-1) s(a-1, b)
    row = [0] * (a + 1)
    for b in range(1, a + 1):
        up = prev[b] if b < a else 0
        row[b] = prev[b - 1] - (a - 1) * up
    return row


def _second_kind_row(prev: List[int], a: int) -> List[int]:
    # S(a, b) = S(a-1, b-1) + b S(a-1, b)
    row = [0] * (a + 1)
    for b in range(1, a + 1):
        up = prev[b] if b < a else 0
        row[b] = prev[b - 1] + b * up
    return row


_FIRST = _Triangle(_first_kind_row)
_SECOND = _Triangle(_second_kind_row)


def stirling_first_signed(a: int, b: int) -> int:
    """Signed Stirling number of the first kind ``s(a, b)``; 0 outside ``0 <= b <= a``."""
    return _FIRST.get(a, b)


def stirling_second(a: int, b: int) -> int:
    """Stirling number of the second kind ``S(a, b)``; 0 outside ``0 <= b <= a``."""
    return _SECOND.get(a, b)


def binomial(a: int, b: int) -> int:
    if a < 0:
        raise ValueError(f"binomial needs a >= 0, got {a}")
    if b < 0 or b > a:
        return 0
    return comb(a, b)


_POWER_SUMS: dict = {}
_POWER_LOCK = threading.Lock()


def power_sum(upper: int, i: int) -> int:
    """Return ``sum(j**i for j in range(upper + 1))`` exactly.

    Prefix sums for each exponent are cached, so repeated calls with growing
    ``upper`` cost one multiplication per new term.
    """
    if i < 1:
        raise ValueError(f"power_sum needs i >= 1, got {i}")
    if upper < 0:
        return 0
    prefix = _POWER_SUMS.get(i)
    if prefix is None or len(prefix) <= upper:
        with _POWER_LOCK:
            prefix = list(_POWER_SUMS.get(i, [0]))
            acc = prefix[-1]
            for j in range(len(prefix), upper + 1):
                acc += j**i
                prefix.append(acc)
            _POWER_SUMS[i] = prefix
    return prefix[upper]


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Yield every ordered tuple of ``parts`` positive integers summing to ``total``.

    Tuples come out in lexicographic order.  Nothing is yielded when
    ``parts > total``.  ``compositions(0, 0)`` yields the empty tuple, the one
    composition of zero.
    """
    if parts < 0 or total < 0:
        return
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def count_compositions(total: int, parts: int) -> int:
    if parts == 0:
        return 1 if total == 0 else 0
    return binomial(total - 1, parts - 1) if total >= 1 else 0
