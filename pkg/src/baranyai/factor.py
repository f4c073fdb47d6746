"""One-factorizations and near-one-factorizations of complete graphs.

Vertex set is Z_m.  The near-one-factor ``F_k`` of K_m (m odd) holds the pairs
``{x, y}`` with ``x + y = 2k (mod m)`` and isolates vertex ``k``.  Adjoining the
pair ``{k, m}`` to each ``F_k`` of K_m gives a one-factorization of K_{m+1}.

Pair order inside a factor is fixed, because the quadrupling constructions
address pairs by position: near-one-factor pairs are sorted by their smaller
vertex and the adjoined pair ``{k, m}`` goes last.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .core import Design, DesignError, Kind, design_from_classes

Pair = tuple[int, int]


@dataclass(frozen=True)
class Factorization:
    m: int
    factors: tuple[tuple[Pair, ...], ...]
    near: bool

    def __len__(self) -> int:
        return len(self.factors)

    def __getitem__(self, i: int) -> tuple[Pair, ...]:
        return self.factors[i]

    @property
    def size(self) -> int:
        """Pairs per factor."""
        return len(self.factors[0]) if self.factors else 0

    def pair(self, i: int, j: int) -> Pair:
        """``F_{i,j}``; the position ``j`` is reduced modulo the factor size."""
        f = self.factors[i]
        return f[j % len(f)]

    @cached_property
    def index(self) -> dict[Pair, tuple[int, int]]:
        return {p: (i, j) for i, fac in enumerate(self.factors) for j, p in enumerate(fac)}

    def locate(self, pair) -> tuple[int, int]:
        return locate_pair(self, pair)

    def as_design(self) -> Design:
        if self.near:
            raise DesignError("a near-one-factorization has no parallel classes")
        return design_from_classes(Kind.OF, self.m, 2, self.factors, provenance=f"OF:cyclic(m={self.m})")


def near_factor(m: int, k: int) -> tuple[Pair, ...]:
    """F_k of K_m, m odd: pairs {x, y} with x + y = 2k (mod m), by smaller vertex."""
    if m < 3 or m % 2 == 0:
        raise DesignError(f"near-one-factorization needs odd m >= 3, got {m}")
    if not 0 <= k < m:
        raise DesignError(f"factor index {k} outside [0, {m})")
    return tuple((x, (2 * k - x) % m) for x in range(m) if x < (2 * k - x) % m)


def one_factor(m: int, k: int) -> tuple[Pair, ...]:
    """F_k of K_m, m even: the near factor of K_{m-1} plus the edge {k, m - 1}."""
    if m < 2 or m % 2:
        raise DesignError(f"one-factorization needs even m >= 2, got {m}")
    if m == 2:
        if k != 0:
            raise DesignError(f"factor index {k} outside [0, 1)")
        return ((0, 1),)
    return near_factor(m - 1, k) + ((k, m - 1),)


@lru_cache(maxsize=None)
def near_one_factorization(m: int) -> Factorization:
    return Factorization(m, tuple(near_factor(m, k) for k in range(m)), near=True)


@lru_cache(maxsize=None)
def one_factorization(m: int) -> Factorization:
    if m < 2 or m % 2:
        raise DesignError(f"one-factorization needs even m >= 2, got {m}")
    return Factorization(m, tuple(one_factor(m, k) for k in range(m - 1)), near=False)


def factorization(m: int) -> Factorization:
    """One-factorization for even m, near-one-factorization for odd m."""
    return one_factorization(m) if m % 2 == 0 else near_one_factorization(m)


def locate_pair(f: Factorization, pair) -> tuple[int, int]:
    x, y = pair
    if x == y:
        raise DesignError(f"{pair} is not an edge")
    if not (0 <= x < f.m and 0 <= y < f.m):
        raise DesignError(f"{pair} has a vertex outside [0, {f.m})")
    return f.index[(min(x, y), max(x, y))]
