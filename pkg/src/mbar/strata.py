"""Ground-truth class of M̄_{0,n} as a sum over boundary strata.

Each stratum is a stable tree, encoded by the laminar family of marked subsets
cut off by its edges.  A subset is always taken on the side not containing the
last marking ``n``, so two subsets are compatible exactly when they are nested
or disjoint.  The open stratum of a tree is the product over its vertices of
the open moduli spaces M_{0,valence}, whose class is ``(L-2)(L-3)...(L-m+2)``.

Subsets are stored as bitmasks over markings ``1 .. n-1`` (bit ``j-1`` for
marking ``j``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from .errors import DomainError, InternalError
from .lpoly import ONE, LPolynomial, to_betti_table

N_MAX_ORACLE = 9

LaminarFamily = FrozenSet[int]


def mask_to_set(mask: int) -> FrozenSet[int]:
    return frozenset(j + 1 for j in range(mask.bit_length()) if mask >> j & 1)


def set_to_mask(s) -> int:
    m = 0
    for j in s:
        m |= 1 << (j - 1)
    return m


@lru_cache(maxsize=None)
def open_class(m: int) -> LPolynomial:
    """Class of M_{0,m}: product of ``(L - i)`` for ``i = 2 .. m-2``."""
    if m < 3:
        raise DomainError(f"M_0,m needs m >= 3, got {m}")
    p = ONE
    for i in range(2, m - 1):
        p = p * LPolynomial((-i, 1))
    return p


@lru_cache(maxsize=None)
def marked_subsets(n: int) -> Tuple[int, ...]:
    """All admissible subsets of ``{1..n-1}`` in canonical order.

    Sizes run from 2 to ``n-2``; the order is by size, then by sorted elements.
    """
    out = []
    for mask in range(1 << (n - 1)):
        size = bin(mask).count("1")
        if 2 <= size <= n - 2:
            out.append(mask)
    out.sort(key=lambda m: (bin(m).count("1"), sorted(mask_to_set(m))))
    return tuple(out)


def compatible(a: int, b: int) -> bool:
    inter = a & b
    return inter == 0 or inter == a or inter == b


def is_laminar(family) -> bool:
    members = list(family)
    return all(compatible(a, b) for i, a in enumerate(members) for b in members[i + 1:])


def _check_n(n: int, n_max: Optional[int]) -> None:
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    if n_max is not None and n > n_max:
        raise DomainError(f"n={n} exceeds the strata oracle limit n_max_oracle={n_max}")


def enumerate_laminar_families(n: int, n_max: Optional[int] = None) -> Iterator[LaminarFamily]:
    """Yield every laminar family of marked subsets, the empty one included, once each."""
    _check_n(n, n_max)
    subsets = marked_subsets(n)
    count = len(subsets)
    # compat[i]: indices j > i compatible with subset i
    compat: List[List[int]] = [
        [j for j in range(i + 1, count) if compatible(subsets[i], subsets[j])] for i in range(count)
    ]

    stack: List[int] = []

    def extend(candidates: List[int]) -> Iterator[LaminarFamily]:
        yield frozenset(subsets[i] for i in stack)
        for pos, i in enumerate(candidates):
            allowed = set(compat[i])
            stack.append(i)
            yield from extend([j for j in candidates[pos + 1:] if j in allowed])
            stack.pop()

    yield from extend(list(range(count)))


@dataclass
class Vertex:
    subset: Optional[int]  # None for the root
    children: List[int] = field(default_factory=list)
    legs: FrozenSet[int] = frozenset()

    @property
    def valence(self) -> int:
        return len(self.children) + len(self.legs) + (0 if self.subset is None else 1)


@dataclass
class StableTree:
    n: int
    vertices: List[Vertex]

    @property
    def valences(self) -> List[int]:
        return [v.valence for v in self.vertices]

    @property
    def edges(self) -> int:
        return len(self.vertices) - 1


def family_to_tree(family: LaminarFamily, n: int) -> StableTree:
    """Build the stable tree of a laminar family.  Vertex 0 is the root."""
    members = sorted(family, key=lambda m: bin(m).count("1"))
    vertices = [Vertex(None)] + [Vertex(m) for m in members]
    index: Dict[int, int] = {m: i + 1 for i, m in enumerate(members)}
    covered = {i: 0 for i in range(len(vertices))}
    for pos, s in enumerate(members):
        parent = 0
        for t in members[pos + 1:]:
            if t != s and t & s == s:
                parent = index[t]
                break
        vertices[parent].children.append(index[s])
        covered[parent] |= s
    full = (1 << (n - 1)) - 1
    for i, v in enumerate(vertices):
        own = full if v.subset is None else v.subset
        legs = mask_to_set(own & ~covered[i])
        v.legs = legs | {n} if v.subset is None else legs
    tree = StableTree(n, vertices)
    bad = [val for val in tree.valences if val < 3]
    if bad:
        raise InternalError(f"unstable vertex in tree for family {sorted(map(sorted, map(mask_to_set, family)))}")
    return tree


def stratum_class(tree: StableTree) -> LPolynomial:
    p = ONE
    for val in tree.valences:
        p = p * open_class(val)
    return p


@lru_cache(maxsize=None)
def _strata_sum(n: int) -> Tuple[LPolynomial, int]:
    total = LPolynomial()
    # Group strata by their valence multiset: products repeat heavily.
    by_shape: Dict[Tuple[int, ...], int] = {}
    count = 0
    for fam in enumerate_laminar_families(n):
        shape = tuple(sorted(family_to_tree(fam, n).valences))
        by_shape[shape] = by_shape.get(shape, 0) + 1
        count += 1
    for shape, mult in sorted(by_shape.items()):
        p = ONE
        for val in shape:
            p = p * open_class(val)
        total = total + p * mult
    return total, count


def class_via_strata(n: int, n_max_oracle: int = N_MAX_ORACLE) -> LPolynomial:
    _check_n(n, n_max_oracle)
    p, _ = _strata_sum(n)
    to_betti_table(p, n)
    return p


def stratum_count(n: int, n_max_oracle: int = N_MAX_ORACLE) -> int:
    _check_n(n, n_max_oracle)
    return _strata_sum(n)[1]
