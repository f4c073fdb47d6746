"""Direct generation of single columns and entries of the doubling chain.

The listing of BP(2t, 4) is Type S (8 classes per class of BP(t, 4)), then
Type T (24 per class of a resolvable SQS(t)), then Type F (one per factor of
K_t).  Interval arithmetic on those counts finds the ingredient of the i-th
class, and only that ingredient is built, recursing on BP(t, 4) for Type S.
Work per column is O(n) apart from sorting the output blocks.
"""

from __future__ import annotations

from functools import lru_cache
from math import ceil, comb

from . import affine, seeds
from .core import Block, DesignError, ParallelClass
from .doubling import double_type_f, t_index, type_counts, type_s_class, type_t_class
from .factor import one_factor


def in_chain(n: int) -> bool:
    """n = 4 * 2^e, the sizes reached from BP(4, 4) and BP(8, 4) by doubling."""
    return n >= 4 and n % 4 == 0 and not (n // 4) & (n // 4 - 1)


def column_count(n: int) -> int:
    return comb(n - 1, 3)


def _check(n: int, i: int) -> None:
    if not in_chain(n):
        raise DesignError(f"n={n} is not in the doubling chain 4, 8, 16, 32, ...")
    if not 1 <= i <= column_count(n):
        raise DesignError(f"column index {i} outside [1, {column_count(n)}]")


@lru_cache(maxsize=None)
def _bp8():
    return seeds.bp_8_4()


def rsqs_class(v: int, i: int) -> ParallelClass:
    """Class i (0-based) of the resolvable SQS(v) used when doubling BP(v, 4)."""
    if v >= 32:
        return affine.affine_class(v, i)
    return seeds.rsqs_provider(v).parallel_class(i)


def locate(n: int, i: int) -> tuple[str, int]:
    """Segment label and 0-based offset of column i inside it."""
    _check(n, i)
    if n <= 8:
        return "seed", i - 1
    s, tt, _ = type_counts(n // 2)
    if i <= s:
        return "S", i - 1
    if i <= s + tt:
        return "T", i - s - 1
    return "F", i - s - tt - 1


def column(n: int, i: int) -> ParallelClass:
    """COL(n, 4, i): the i-th (1-based) class of the listed BP(n, 4)."""
    kind, off = locate(n, i)
    if kind == "seed":
        return ((0, 1, 2, 3),) if n == 4 else _bp8().parallel_class(off)
    t = n // 2
    if kind == "S":
        return type_s_class(column(t, off // 8 + 1), t, off % 8)
    if kind == "T":
        return type_t_class(rsqs_class(t, off // 24), t, *t_index(off % 24))
    return double_type_f(one_factor(t, off), t)


def entry(n: int, i: int, j: int) -> Block:
    """ENT(n, 4, i, j): block j (1-based) of column i, blocks ordered by minimum."""
    if not 1 <= j <= n // 4:
        raise DesignError(f"entry index {j} outside [1, {n // 4}]")
    return column(n, i)[j - 1]


def s_parent(i: int) -> int:
    """Column of BP(t, 4) behind Type S column i of BP(2t, 4)."""
    return ceil(i / 8)
